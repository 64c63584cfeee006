#pragma once

// JSON encoding of defender contexts and recommendations.

#include "oran_aml/advisor.hpp"
#include "oran_aml/catalog_io.hpp"

namespace oran_aml {

/// Every host, Non-RT target, white-box, both data kinds, unlimited budget.
inline DefenderContext permissive_context() {
  DefenderContext ctx;
  for (MlHost h : enum_values<MlHost>()) ctx.hosts_available.insert(h);
  for (PerformanceFlag f : enum_values<PerformanceFlag>()) ctx.performance_budget.insert(f);
  return ctx;
}

/// Absent fields keep the permissive defaults.
inline DefenderContext decode_context(const json& doc, std::vector<Violation>& violations) {
  detail::Reader r(violations);
  DefenderContext ctx = permissive_context();
  if (!doc.is_object()) {
    r.fail("", "expected an object");
    return ctx;
  }
  if (doc.contains("model_access")) ctx.model_access = r.enumeration<ModelAccess>(doc, "", "model_access");
  if (doc.contains("has_training_data")) ctx.has_training_data = r.boolean(doc, "", "has_training_data");
  if (doc.contains("has_feature_data")) ctx.has_feature_data = r.boolean(doc, "", "has_feature_data");
  if (doc.contains("hosts_available")) ctx.hosts_available = r.enum_set<MlHost>(doc, "", "hosts_available");
  if (doc.contains("ric_target")) ctx.ric_target = r.enumeration<RicLocation>(doc, "", "ric_target");
  if (doc.contains("performance_budget"))
    ctx.performance_budget = r.enum_set<PerformanceFlag>(doc, "", "performance_budget");
  if (violations.empty())
    for (auto& v : validate_context(ctx)) violations.push_back(std::move(v));
  return ctx;
}

inline DefenderContext load_context(const json& doc) {
  std::vector<Violation> v;
  auto ctx = decode_context(doc, v);
  if (!v.empty()) throw ValidationError(std::move(v));
  return ctx;
}

inline json encode_context(const DefenderContext& ctx) {
  return {{"model_access", std::string(to_string(ctx.model_access))},
          {"has_training_data", ctx.has_training_data},
          {"has_feature_data", ctx.has_feature_data},
          {"hosts_available", detail::names(ctx.hosts_available)},
          {"ric_target", std::string(to_string(ctx.ric_target))},
          {"performance_budget", detail::names(ctx.performance_budget)}};
}

inline json encode_recommendations(const std::vector<Recommendation>& recs) {
  json arr = json::array();
  for (const auto& r : recs) {
    arr.push_back({{"rank", r.rank},
                   {"countermeasure", r.countermeasure},
                   {"name", r.name},
                   {"category", std::string(to_string(r.category))},
                   {"matched_threats", detail::names(r.matched_threats)},
                   {"matched_techniques", r.matched_techniques},
                   {"violated_budget", detail::names(r.violated_budget)},
                   {"rationale", r.rationale}});
  }
  return arr;
}

}  // namespace oran_aml
