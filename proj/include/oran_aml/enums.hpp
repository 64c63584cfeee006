#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oran_aml {

/// Name table for an enumeration. Specializations provide `names`, indexed by
/// the enumerator's underlying value (enumerators must be dense from zero).
template <class E>
struct enum_traits;

template <class E>
inline constexpr std::size_t enum_count = enum_traits<E>::names.size();

template <class E>
constexpr std::string_view to_string(E value) {
  return enum_traits<E>::names[static_cast<std::size_t>(value)];
}

template <class E>
constexpr std::optional<E> enum_from_string(std::string_view text) {
  const auto& names = enum_traits<E>::names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == text) return static_cast<E>(i);
  }
  return std::nullopt;
}

template <class E>
constexpr std::array<E, enum_count<E>> enum_values() {
  std::array<E, enum_count<E>> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<E>(i);
  return out;
}

/// Fixed-size map keyed by a dense enumeration.
template <class E, class T>
class EnumMap {
 public:
  constexpr EnumMap() = default;
  constexpr explicit EnumMap(const T& fill) { values_.fill(fill); }

  constexpr T& operator[](E key) { return values_[static_cast<std::size_t>(key)]; }
  constexpr const T& operator[](E key) const { return values_[static_cast<std::size_t>(key)]; }

  constexpr auto begin() { return values_.begin(); }
  constexpr auto end() { return values_.end(); }
  constexpr auto begin() const { return values_.begin(); }
  constexpr auto end() const { return values_.end(); }
  static constexpr std::size_t size() { return enum_count<E>; }

  friend constexpr bool operator==(const EnumMap&, const EnumMap&) = default;

 private:
  std::array<T, enum_count<E>> values_{};
};

/// Small set of enumerators backed by a bitset.
template <class E>
class EnumSet {
 public:
  EnumSet() = default;
  EnumSet(std::initializer_list<E> items) {
    for (E e : items) insert(e);
  }

  void insert(E e) { bits_.set(static_cast<std::size_t>(e)); }
  void erase(E e) { bits_.reset(static_cast<std::size_t>(e)); }
  bool contains(E e) const { return bits_.test(static_cast<std::size_t>(e)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }
  bool intersects(const EnumSet& other) const { return (bits_ & other.bits_).any(); }

  EnumSet operator&(const EnumSet& other) const {
    EnumSet out;
    out.bits_ = bits_ & other.bits_;
    return out;
  }
  EnumSet operator-(const EnumSet& other) const {
    EnumSet out;
    out.bits_ = bits_ & ~other.bits_;
    return out;
  }

  /// Members in enumeration order.
  std::vector<E> values() const {
    std::vector<E> out;
    for (E e : enum_values<E>()) {
      if (contains(e)) out.push_back(e);
    }
    return out;
  }

  friend bool operator==(const EnumSet&, const EnumSet&) = default;

 private:
  std::bitset<enum_count<E>> bits_;
};

#define ORAN_AML_ENUM_NAMES(Enum, ...)                                      \
  template <>                                                               \
  struct enum_traits<Enum> {                                                \
    static constexpr auto names = std::to_array<std::string_view>({__VA_ARGS__}); \
  }

// Capabilities, in the column order used by the attack-technique table.
enum class Capability : std::uint8_t {
  AKD1, AKD2, AKD3, AKD4,
  AKMFull, AKM1, AKM2, AKM3,
  ACD1, ACD2, ACD3, ACD4, ACD5, ACD6,
  ACM1, ACM2,
};
ORAN_AML_ENUM_NAMES(Capability, "AKD1", "AKD2", "AKD3", "AKD4", "AKM-Full", "AKM1", "AKM2",
                    "AKM3", "ACD1", "ACD2", "ACD3", "ACD4", "ACD5", "ACD6", "ACM1", "ACM2");
inline constexpr std::size_t kCapabilityCount = 16;
static_assert(enum_count<Capability> == kCapabilityCount);

enum class Axis : std::uint8_t { DataKnowledge, ModelKnowledge, DataAccess, ModelAccess };
ORAN_AML_ENUM_NAMES(Axis, "DataKnowledge", "ModelKnowledge", "DataAccess", "ModelAccess");

constexpr Axis axis_of(Capability c) {
  const auto i = static_cast<std::size_t>(c);
  if (i < 4) return Axis::DataKnowledge;
  if (i < 8) return Axis::ModelKnowledge;
  if (i < 14) return Axis::DataAccess;
  return Axis::ModelAccess;
}

constexpr bool is_knowledge(Axis a) { return a == Axis::DataKnowledge || a == Axis::ModelKnowledge; }

enum class Actor : std::uint8_t { A1, A2, A3, A4, A5, A6 };
ORAN_AML_ENUM_NAMES(Actor, "A1", "A2", "A3", "A4", "A5", "A6");

enum class Threat : std::uint8_t { T1, T2, T3, T4, T5, T6, T7 };
ORAN_AML_ENUM_NAMES(Threat, "T1", "T2", "T3", "T4", "T5", "T6", "T7");

enum class SecurityProperty : std::uint8_t { Integrity, Availability, Privacy };
ORAN_AML_ENUM_NAMES(SecurityProperty, "Integrity", "Availability", "Privacy");

enum class ImpactKind : std::uint8_t { Tampering, DenialOfService, InformationDisclosure };
ORAN_AML_ENUM_NAMES(ImpactKind, "Tampering", "DenialOfService", "InformationDisclosure");

enum class ThreatModelClass : std::uint8_t { WhiteBox, InteractiveBlackBox, CompleteBlackBox };
ORAN_AML_ENUM_NAMES(ThreatModelClass, "WhiteBox", "InteractiveBlackBox", "CompleteBlackBox");

enum class Phase : std::uint8_t { Training, Inference };
ORAN_AML_ENUM_NAMES(Phase, "Training", "Inference");

enum class Scenario : std::uint8_t { DS1, DS2, DS3, DS4, DS5 };
ORAN_AML_ENUM_NAMES(Scenario, "DS1", "DS2", "DS3", "DS4", "DS5");

enum class MlHost : std::uint8_t { DataCollection, DataHost, TrainingHost, ServingHost, MlApp };
ORAN_AML_ENUM_NAMES(MlHost, "DataCollection", "DataHost", "TrainingHost", "ServingHost", "MlApp");

enum class RicLocation : std::uint8_t { NonRtRic, NearRtRic, OCuOdu };
ORAN_AML_ENUM_NAMES(RicLocation, "NonRtRic", "NearRtRic", "OCuOdu");

enum class LatencyClass : std::uint8_t { High, Low, UltraLow };
ORAN_AML_ENUM_NAMES(LatencyClass, "High", "Low", "UltraLow");

enum class LearningMode : std::uint8_t { Offline, Online, Any };
ORAN_AML_ENUM_NAMES(LearningMode, "Offline", "Online", "Any");

enum class CountermeasureCategory : std::uint8_t {
  DataPreprocessing, RobustnessEnhancement, PrivacyPreserving, AuxiliaryModel
};
ORAN_AML_ENUM_NAMES(CountermeasureCategory, "DataPreprocessing", "RobustnessEnhancement",
                    "PrivacyPreserving", "AuxiliaryModel");

enum class FamilyClass : std::uint8_t { GradientBased, TransferabilityBased, QueryBased };
ORAN_AML_ENUM_NAMES(FamilyClass, "GradientBased", "TransferabilityBased", "QueryBased");

enum class SecurityType : std::uint8_t { Prevention, Robustness, Detection };
ORAN_AML_ENUM_NAMES(SecurityType, "Prevention", "Robustness", "Detection");

enum class DefenderNeed : std::uint8_t {
  AnalyzeInputs, ModifyInputs, AnalyzeOutputs, ModifyOutputs, ModifyTraining, ModifyArchitecture
};
ORAN_AML_ENUM_NAMES(DefenderNeed, "AnalyzeInputs", "ModifyInputs", "AnalyzeOutputs",
                    "ModifyOutputs", "ModifyTraining", "ModifyArchitecture");

enum class PerformanceFlag : std::uint8_t {
  AccuracyDecrease, RuntimeOverheadInference, RuntimeOverheadTraining, MemoryOverhead
};
ORAN_AML_ENUM_NAMES(PerformanceFlag, "AccuracyDecrease", "RuntimeOverheadInference",
                    "RuntimeOverheadTraining", "MemoryOverhead");

enum class ModelAccess : std::uint8_t { BlackBox, WhiteBox };
ORAN_AML_ENUM_NAMES(ModelAccess, "BlackBox", "WhiteBox");

enum class ImpactGrade : std::uint8_t { None, Low, Medium, High, Critical };
ORAN_AML_ENUM_NAMES(ImpactGrade, "None", "Low", "Medium", "High", "Critical");

constexpr double impact_value(ImpactGrade g) { return 2.5 * static_cast<double>(g); }

/// P2 attack-family label a countermeasure is matched against.
constexpr FamilyClass family_class_of(ThreatModelClass c) {
  switch (c) {
    case ThreatModelClass::WhiteBox: return FamilyClass::GradientBased;
    case ThreatModelClass::InteractiveBlackBox: return FamilyClass::QueryBased;
    case ThreatModelClass::CompleteBlackBox: return FamilyClass::TransferabilityBased;
  }
  return FamilyClass::GradientBased;
}

#undef ORAN_AML_ENUM_NAMES

}  // namespace oran_aml
