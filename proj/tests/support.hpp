#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "oran_aml/assessment_io.hpp"
#include "oran_aml/catalog_io.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return ORAN_AML_DATA_DIR; }

inline const oran_aml::Catalog& bundled_catalog() {
  static const oran_aml::Catalog c = oran_aml::load_catalog_file(data_dir() / "catalog.json");
  return c;
}

inline const std::vector<oran_aml::Question>& bundled_questions() {
  static const auto q = oran_aml::load_questions_file(data_dir() / "questions.json");
  return q;
}

inline oran_aml::Project fixture_project() {
  return oran_aml::load_project_file(data_dir() / "fixtures" / "traffic_steering.json");
}

/// Renders a technique row back into table glyphs: 16 capability columns,
/// 3 impact columns, 5 A1 hosts, 15 A2 (location x scenario), A3..A6.
/// Requirement 1 -> "●", 0.5 -> "⊙", 0 -> "○"; booleans -> "●" / "○".
inline std::string glyph_row(const oran_aml::AttackTechnique& t) {
  using namespace oran_aml;
  auto b = [](bool v) { return std::string(v ? "●" : "○"); };
  std::string out;
  for (Capability c : enum_values<Capability>()) {
    const double r = t.req[c];
    out += r == 1.0 ? "●" : r == 0.5 ? "⊙" : "○";
  }
  for (ImpactKind k : enum_values<ImpactKind>()) out += b(t.impacts.contains(k));
  for (MlHost h : enum_values<MlHost>()) out += b(t.feasibility.a1[h]);
  for (RicLocation l : enum_values<RicLocation>())
    for (Scenario s : enum_values<Scenario>()) out += b(t.feasibility.a2[l][s]);
  out += b(t.feasibility.a3) + b(t.feasibility.a4) + b(t.feasibility.a5) + b(t.feasibility.a6);
  return out;
}

/// Random profile over the bundled questions with every impact graded.
inline oran_aml::UseCaseProfile random_profile(std::mt19937_64& rng, const std::vector<oran_aml::Question>& qs) {
  using namespace oran_aml;
  UseCaseProfile p;
  p.title = "random";
  p.scenario = static_cast<Scenario>(rng() % enum_count<Scenario>);
  p.actor = static_cast<Actor>(rng() % enum_count<Actor>);
  for (Threat t : enum_values<Threat>()) p.impact_grades[t] = static_cast<ImpactGrade>(rng() % enum_count<ImpactGrade>);
  for (const auto& q : qs) {
    const auto k = rng() % (q.scale.size() + 1);
    if (k < q.scale.size()) p.answers[q.id] = q.scale[k].label;
  }
  p.apply_dominance_closure = (rng() % 2) == 0;
  return p;
}

}  // namespace testsupport
