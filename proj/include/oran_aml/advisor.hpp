#pragma once

// Countermeasure filtering and ranking for prioritized threats.

#include <algorithm>
#include <string>
#include <vector>

#include "oran_aml/catalog.hpp"
#include "oran_aml/format.hpp"
#include "oran_aml/risk.hpp"

namespace oran_aml {

struct DefenderContext {
  ModelAccess model_access = ModelAccess::WhiteBox;
  bool has_training_data = true;
  bool has_feature_data = true;
  EnumSet<MlHost> hosts_available;
  RicLocation ric_target = RicLocation::NonRtRic;
  /// Performance costs the defender tolerates.
  EnumSet<PerformanceFlag> performance_budget;
};

inline std::vector<Violation> validate_context(const DefenderContext& ctx) {
  std::vector<Violation> out;
  if (ctx.hosts_available.empty()) out.push_back({"hosts_available", "at least one host is required"});
  if (ctx.ric_target == RicLocation::OCuOdu) out.push_back({"ric_target", "must be NearRtRic or NonRtRic"});
  return out;
}

struct Applicability {
  bool ok = true;
  /// One fact per constraint, prefixed "ok:" or "violated:".
  std::vector<std::string> reasons;
};

inline Applicability applicable(const Countermeasure& cm, const DefenderContext& ctx) {
  const auto& c = cm.oran_constraints;
  Applicability a;
  auto fact = [&](bool holds, const std::string& text) {
    a.ok = a.ok && holds;
    a.reasons.push_back((holds ? "ok: " : "violated: ") + text);
  };
  if (ctx.model_access == ModelAccess::BlackBox) fact(c.black_box_ok, "usable on a black-box model");
  if (c.needs_training_data) fact(ctx.has_training_data, "training data available");
  if (c.needs_feature_data) fact(ctx.has_feature_data, "feature data available");
  fact(c.hosts.intersects(ctx.hosts_available), "deployable on an available host");
  if (ctx.ric_target == RicLocation::NearRtRic) fact(c.near_rt_ok, "runs at the Near-RT RIC");
  if (ctx.ric_target == RicLocation::NonRtRic) fact(c.non_rt_ok, "runs at the Non-RT RIC");
  return a;
}

/// Countermeasures whose threat coverage includes `threat`, before any
/// family or context filtering.
inline std::vector<const Countermeasure*> candidates_for_threat(const Catalog& catalog, Threat threat) {
  std::vector<const Countermeasure*> out;
  for (const auto& cm : catalog.countermeasures)
    if (cm.threats_covered.contains(threat)) out.push_back(&cm);
  return out;
}

struct Recommendation {
  std::string countermeasure;
  std::string name;
  CountermeasureCategory category{};
  EnumSet<Threat> matched_threats;
  std::vector<std::string> matched_techniques;
  EnumSet<PerformanceFlag> violated_budget;
  std::size_t rank = 0;
  std::vector<std::string> rationale;
};

/// Matches countermeasures against the top_n highest-risk entries (entries
/// with zero risk are skipped) and ranks the applicable ones.
inline std::vector<Recommendation> recommend(const AssessmentResult& result, const DefenderContext& ctx,
                                             const Catalog& catalog, std::size_t top_n) {
  if (top_n < 1) throw Error("top_n must be at least 1");
  std::vector<const RiskEntry*> top;
  for (std::size_t idx : result.prioritized) {
    if (top.size() == top_n) break;
    if (result.entries[idx].risk > 0.0) top.push_back(&result.entries[idx]);
  }

  std::vector<Recommendation> out;
  for (const auto& cm : catalog.countermeasures) {
    Recommendation rec;
    for (const RiskEntry* e : top) {
      const AttackTechnique& t = catalog.technique(e->technique);
      const FamilyClass fc = family_class_of(catalog.family_of(t).threat_model_class);
      if (!cm.threats_covered.contains(e->threat) || !cm.families_covered.contains(fc)) continue;
      rec.matched_threats.insert(e->threat);
      if (std::find(rec.matched_techniques.begin(), rec.matched_techniques.end(), t.id) ==
          rec.matched_techniques.end()) {
        rec.matched_techniques.push_back(t.id);
        rec.rationale.push_back("covers " + std::string(to_string(e->threat)) + " via " + t.id + " (" +
                                std::string(to_string(fc)) + ")");
      }
    }
    if (rec.matched_threats.empty()) continue;
    const Applicability app = applicable(cm, ctx);
    if (!app.ok) continue;
    rec.countermeasure = cm.id;
    rec.name = cm.name;
    rec.category = cm.category;
    rec.violated_budget = cm.performance_flags - ctx.performance_budget;
    rec.rationale.insert(rec.rationale.end(), app.reasons.begin(), app.reasons.end());
    for (PerformanceFlag f : rec.violated_budget.values())
      rec.rationale.push_back("over budget: " + std::string(to_string(f)));
    out.push_back(std::move(rec));
  }
  std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.matched_threats.size() != b.matched_threats.size())
      return a.matched_threats.size() > b.matched_threats.size();
    if (a.violated_budget.size() != b.violated_budget.size()) return a.violated_budget.size() < b.violated_budget.size();
    return a.name < b.name;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

struct CoverageMatrix {
  std::vector<Threat> threats;
  std::vector<std::string> countermeasures;
  std::vector<std::vector<bool>> cells;  // [threat][countermeasure]

  bool at(Threat t, std::string_view cm) const {
    auto col = std::find(countermeasures.begin(), countermeasures.end(), cm);
    if (col == countermeasures.end()) throw Error("unknown countermeasure " + std::string(cm));
    return cells[static_cast<std::size_t>(t)][static_cast<std::size_t>(col - countermeasures.begin())];
  }
};

inline CoverageMatrix coverage_matrix(const Catalog& catalog) {
  CoverageMatrix m;
  for (Threat t : enum_values<Threat>()) m.threats.push_back(t);
  for (const auto& cm : catalog.countermeasures) m.countermeasures.push_back(cm.id);
  for (Threat t : m.threats) {
    std::vector<bool> row;
    for (const auto& cm : catalog.countermeasures) row.push_back(cm.threats_covered.contains(t));
    m.cells.push_back(std::move(row));
  }
  return m;
}

namespace detail {

template <class E>
std::string joined(const EnumSet<E>& set) {
  std::string out;
  for (E e : set.values()) {
    if (!out.empty()) out += ';';
    out += to_string(e);
  }
  return out;
}

}  // namespace detail

/// rank, countermeasure, category, covered_threats, violated_budget_flags, rationale
inline std::string recommendations_csv(const std::vector<Recommendation>& recs) {
  std::string out =
      csv_row({"rank", "countermeasure", "category", "covered_threats", "violated_budget_flags", "rationale"});
  for (const auto& r : recs) {
    std::string rationale;
    for (const auto& s : r.rationale) rationale += (rationale.empty() ? "" : "; ") + s;
    out += csv_row({std::to_string(r.rank), r.name, std::string(to_string(r.category)),
                    detail::joined(r.matched_threats), detail::joined(r.violated_budget), rationale});
  }
  return out;
}

}  // namespace oran_aml
