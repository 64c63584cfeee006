#pragma once

// Traffic-steering KPI records, expert QoE labeling and a synthetic
// generator standing in for the simulator.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oran_aml/enums.hpp"
#include "oran_aml/error.hpp"
#include "oran_aml/format.hpp"

namespace oran_aml {

enum class QoEClass : std::uint8_t { Excellent, Good, Average, Poor };

template <>
struct enum_traits<QoEClass> {
  static constexpr auto names = std::to_array<std::string_view>({"Excellent", "Good", "Average", "Poor"});
};

namespace lab {

inline constexpr std::size_t kQoEClassCount = 4;

struct KpiSample {
  std::string ue_id;
  std::string serving_cell_id;
  double pdcp_dl_bytes = 0;
  double pdcp_ul_bytes = 0;
  double prb_dl_ratio = 0;
  double prb_ul_ratio = 0;
  double rsrp = -140;  // dBm
  double rsrq = -20;   // dB
  double sinr = -20;   // dB
  double cell_pdcp_dl = 0;
  double cell_pdcp_ul = 0;
  double cell_prb_dl_ratio = 0;
  double cell_prb_ul_ratio = 0;

  friend bool operator==(const KpiSample&, const KpiSample&) = default;
};

inline constexpr std::size_t kFeatureCount = 11;

inline const std::array<std::string_view, kFeatureCount>& feature_names() {
  static constexpr std::array<std::string_view, kFeatureCount> names{
      "pdcp_dl_bytes", "pdcp_ul_bytes", "prb_dl_ratio", "prb_ul_ratio", "rsrp", "rsrq",
      "sinr", "cell_pdcp_dl", "cell_pdcp_ul", "cell_prb_dl_ratio", "cell_prb_ul_ratio"};
  return names;
}

inline constexpr std::size_t kPrbDl = 2, kRsrp = 4, kSinr = 6;

/// Valid range of each feature, in feature_names() order.
struct FeatureBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

inline const FeatureBox& kpi_bounds() {
  static const FeatureBox box{{0, 0, 0, 0, -140, -20, -20, 0, 0, 0, 0},
                              {2e7, 5e6, 1, 1, -40, -3, 40, 2e8, 5e7, 1, 1}};
  return box;
}

inline std::vector<double> to_features(const KpiSample& s) {
  return {s.pdcp_dl_bytes, s.pdcp_ul_bytes, s.prb_dl_ratio, s.prb_ul_ratio, s.rsrp, s.rsrq,
          s.sinr, s.cell_pdcp_dl, s.cell_pdcp_ul, s.cell_prb_dl_ratio, s.cell_prb_ul_ratio};
}

inline KpiSample from_features(const std::vector<double>& f, std::string ue = {}, std::string cell = {}) {
  if (f.size() != kFeatureCount) throw Error("expected " + std::to_string(kFeatureCount) + " features");
  return {std::move(ue), std::move(cell), f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8], f[9], f[10]};
}

inline bool valid_sample(const KpiSample& s) {
  const auto f = to_features(s);
  const auto& b = kpi_bounds();
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    if (!(f[i] >= b.lower[i] && f[i] <= b.upper[i])) return false;
  return true;
}

/// Threshold cascade over (sinr, rsrp, prb_dl_ratio). Index 0/1/2 holds the
/// minimum for Excellent/Good/Average; anything else is Poor. A value equal
/// to a threshold belongs to the higher class.
struct LabelingPolicy {
  std::array<double, 3> sinr{20.0, 10.0, 0.0};
  std::array<double, 3> rsrp{-80.0, -95.0, -110.0};
  std::array<double, 3> prb_dl{0.30, 0.15, 0.05};

  bool well_ordered() const {
    for (std::size_t i = 1; i < 3; ++i)
      if (!(sinr[i] < sinr[i - 1] && rsrp[i] < rsrp[i - 1] && prb_dl[i] < prb_dl[i - 1])) return false;
    return true;
  }
};

inline QoEClass expert_label(double sinr, double rsrp, double prb_dl, const LabelingPolicy& p = {}) {
  for (std::size_t c = 0; c < 3; ++c)
    if (sinr >= p.sinr[c] && rsrp >= p.rsrp[c] && prb_dl >= p.prb_dl[c]) return static_cast<QoEClass>(c);
  return QoEClass::Poor;
}

inline QoEClass expert_label(const KpiSample& s, const LabelingPolicy& p = {}) {
  return expert_label(s.sinr, s.rsrp, s.prb_dl_ratio, p);
}

inline QoEClass expert_label_features(const std::vector<double>& f, const LabelingPolicy& p = {}) {
  return expert_label(f[kSinr], f[kRsrp], f[kPrbDl], p);
}

struct Gaussian {
  double mean;
  double stddev;
};

/// One mixture component per class over the labeled KPIs.
struct ClassComponent {
  double weight;
  Gaussian sinr;
  Gaussian rsrp;
  Gaussian prb_dl;
};

struct GeneratorConfig {
  std::array<ClassComponent, kQoEClassCount> components{{
      {0.25, {28.0, 4.0}, {-68.0, 6.0}, {0.55, 0.12}},
      {0.25, {15.0, 2.2}, {-87.5, 3.5}, {0.23, 0.035}},
      {0.25, {5.0, 2.2}, {-102.5, 3.5}, {0.10, 0.022}},
      {0.25, {-9.0, 4.5}, {-122.0, 6.0}, {0.025, 0.012}},
  }};
  LabelingPolicy policy{};
  /// Rejection attempts per row before the component is declared unreachable.
  int max_attempts = 10000;
  /// Allowed deviation of each class share from its weight (generate_dataset checks n >= 1000).
  double proportion_tolerance = 0.05;
  /// Scale of the noise on the KPIs the expert does not look at.
  double nuisance_noise = 0.2;
};

struct LabeledSample {
  KpiSample sample;
  QoEClass label{};
};

using Dataset = std::vector<LabeledSample>;

inline void validate_generator(const GeneratorConfig& cfg) {
  double total = 0.0;
  for (const auto& c : cfg.components) {
    if (c.weight < 0.0) throw Error("generator: negative class weight");
    if (c.sinr.stddev <= 0 || c.rsrp.stddev <= 0 || c.prb_dl.stddev <= 0) throw Error("generator: stddev must be positive");
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw Error("generator: class weights must sum to 1");
  if (!cfg.policy.well_ordered()) throw Error("generator: labeling thresholds are not strictly ordered");
}

/// n rows, deterministic per seed. Each row's class is drawn from the
/// mixture weights and its labeled KPIs are resampled until the expert label
/// agrees; the remaining KPIs are noisy functions of the labeled ones.
inline Dataset generate_dataset(const GeneratorConfig& cfg, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error("generator: n must be at least 1");
  validate_generator(cfg);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> pick{cfg.components[0].weight, cfg.components[1].weight,
                                       cfg.components[2].weight, cfg.components[3].weight};
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto clamp = [](double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); };
  const auto& box = kpi_bounds();

  Dataset out;
  out.reserve(n);
  std::array<std::size_t, kQoEClassCount> counts{};
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = pick(rng);
    const auto& comp = cfg.components[static_cast<std::size_t>(cls)];
    KpiSample s;
    bool ok = false;
    for (int attempt = 0; attempt < cfg.max_attempts && !ok; ++attempt) {
      s.sinr = comp.sinr.mean + comp.sinr.stddev * z(rng);
      s.rsrp = comp.rsrp.mean + comp.rsrp.stddev * z(rng);
      s.prb_dl_ratio = comp.prb_dl.mean + comp.prb_dl.stddev * z(rng);
      ok = s.sinr >= box.lower[kSinr] && s.sinr <= box.upper[kSinr] && s.rsrp >= box.lower[kRsrp] &&
           s.rsrp <= box.upper[kRsrp] && s.prb_dl_ratio >= 0.0 && s.prb_dl_ratio <= 1.0 &&
           static_cast<int>(expert_label(s.sinr, s.rsrp, s.prb_dl_ratio, cfg.policy)) == cls;
    }
    if (!ok) throw Error("generator: class " + std::string(to_string(static_cast<QoEClass>(cls))) + " is unreachable");

    const double quality = clamp((s.sinr + 20.0) / 60.0, 0.0, 1.0);
    const double k = cfg.nuisance_noise;
    s.rsrq = clamp(-17.0 + 12.0 * quality + 1.2 * k * z(rng), -20.0, -3.0);
    s.prb_ul_ratio = clamp(0.6 * s.prb_dl_ratio + 0.04 * k * z(rng), 0.0, 1.0);
    s.pdcp_dl_bytes = clamp(s.prb_dl_ratio * (0.3 + 0.7 * quality) * 1.8e7 * (1.0 + 0.15 * k * z(rng)), 0.0, 2e7);
    s.pdcp_ul_bytes = clamp(s.pdcp_dl_bytes * (0.16 + 0.04 * k * z(rng)), 0.0, 5e6);
    s.cell_prb_dl_ratio = clamp(s.prb_dl_ratio + 0.25 + 0.1 * k * z(rng), 0.0, 1.0);
    s.cell_prb_ul_ratio = clamp(s.prb_ul_ratio + 0.18 + 0.08 * k * z(rng), 0.0, 1.0);
    s.cell_pdcp_dl = clamp(s.pdcp_dl_bytes * (6.0 + 2.0 * k * z(rng)), 0.0, 2e8);
    s.cell_pdcp_ul = clamp(s.pdcp_ul_bytes * (6.0 + 2.0 * k * z(rng)), 0.0, 5e7);
    char ue[32], cell[32];
    std::snprintf(ue, sizeof ue, "ue-%05zu", i + 1);
    std::snprintf(cell, sizeof cell, "cell-%02u", static_cast<unsigned>(rng() % 12));
    s.ue_id = ue;
    s.serving_cell_id = cell;
    ++counts[static_cast<std::size_t>(cls)];
    out.push_back({std::move(s), static_cast<QoEClass>(cls)});
  }
  if (n >= 1000) {
    for (std::size_t c = 0; c < kQoEClassCount; ++c) {
      const double share = static_cast<double>(counts[c]) / static_cast<double>(n);
      if (std::fabs(share - cfg.components[c].weight) > cfg.proportion_tolerance)
        throw Error("generator: class share outside tolerance");
    }
  }
  return out;
}

/// One column per KPI field plus `label`; numbers in shortest round-trip form.
inline std::string dataset_csv(const Dataset& data) {
  std::vector<std::string> header{"ue_id", "serving_cell_id"};
  for (auto name : feature_names()) header.emplace_back(name);
  header.emplace_back("label");
  std::string out = csv_row(header);
  for (const auto& row : data) {
    std::vector<std::string> fields{row.sample.ue_id, row.sample.serving_cell_id};
    for (double v : to_features(row.sample)) fields.push_back(format_number(v));
    fields.emplace_back(to_string(row.label));
    out += csv_row(fields);
  }
  return out;
}

}  // namespace lab
}  // namespace oran_aml
