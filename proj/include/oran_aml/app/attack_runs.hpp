#pragma once

// Attack-lab runs as the CLI and the service see them: a request document in,
// a self-contained run record out.

#include <string>

#include "oran_aml/catalog_io.hpp"
#include "oran_aml/lab/traffic_steering.hpp"

namespace oran_aml::app {

struct AttackRequest {
  /// "demo" keeps per-trial traces; "estimate" keeps only the outcomes.
  std::string kind = "demo";
  std::uint64_t seed = 7;
  std::size_t n = 5000;
  std::size_t trials = 25;
  std::string technique = "AT2.2";
  std::size_t query_budget = 25000;
  unsigned threads = 1;
};

inline AttackRequest decode_attack_request(const json& doc, std::vector<Violation>& violations) {
  detail::Reader r(violations);
  AttackRequest req;
  if (!doc.is_object()) {
    r.fail("", "expected an object");
    return req;
  }
  auto count = [&](const char* key, auto& target, double lo) {
    if (!doc.contains(key)) return;
    const json& v = doc[key];
    if (!v.is_number_integer() || v.get<double>() < lo) {
      r.fail(key, "expected an integer >= " + format_number(lo));
      return;
    }
    target = v.get<std::remove_reference_t<decltype(target)>>();
  };
  if (doc.contains("kind")) {
    req.kind = r.string(doc, "", "kind");
    if (req.kind != "demo" && req.kind != "estimate") r.fail("kind", "expected 'demo' or 'estimate'");
  }
  if (doc.contains("technique")) req.technique = r.string(doc, "", "technique");
  count("seed", req.seed, 0);
  count("n", req.n, 100);
  count("trials", req.trials, 1);
  count("query_budget", req.query_budget, 0);
  count("threads", req.threads, 1);
  return req;
}

inline AttackRequest load_attack_request(const json& doc) {
  std::vector<Violation> v;
  auto req = decode_attack_request(doc, v);
  if (!v.empty()) throw ValidationError(std::move(v));
  return req;
}

/// Thread count is left out: it never changes the result.
inline json encode_attack_request(const AttackRequest& req) {
  return {{"kind", req.kind},
          {"seed", req.seed},
          {"n", req.n},
          {"trials", req.trials},
          {"technique", req.technique},
          {"query_budget", req.query_budget}};
}

inline lab::DemoConfig demo_config(const AttackRequest& req) {
  lab::DemoConfig cfg;
  cfg.seed = req.seed;
  cfg.n = req.n;
  cfg.trials = req.trials;
  cfg.technique = req.technique;
  cfg.hsja.query_budget = req.query_budget;
  cfg.threads = req.threads;
  cfg.keep_traces = true;
  return cfg;
}

inline json run_attack(const AttackRequest& req) {
  const lab::DemoResult r = lab::run_demo(demo_config(req));
  json doc = {{"request", encode_attack_request(req)},
              {"holdout_accuracy", r.holdout_accuracy},
              {"sources", r.pool.sources.size()},
              {"inits", r.pool.inits.size()},
              {"estimate", lab::encode_estimate(r.estimate)}};
  doc["example"] = nullptr;
  for (std::size_t i = 0; i < r.estimate.outcomes.size(); ++i) {
    if (r.estimate.outcomes[i].success) {
      doc["example"] = lab::describe_attack(r, i);
      break;
    }
  }
  if (req.kind == "demo") {
    json traces = json::array();
    for (const auto& t : r.estimate.traces) traces.push_back(lab::encode_trace(t));
    doc["traces"] = traces;
  }
  return doc;
}

/// The estimates-file entry for a run record.
inline lab::EffectivenessEstimate estimate_of(const json& record) {
  const json& e = record.at("estimate");
  lab::EffectivenessEstimate est;
  est.technique = e.at("technique").get<std::string>();
  est.trials = e.at("trials").get<std::size_t>();
  est.successes = e.at("successes").get<std::size_t>();
  est.success_rate = e.at("success_rate").get<double>();
  est.wilson = {e.at("wilson_low").get<double>(), e.at("wilson_high").get<double>()};
  est.median_queries = e.at("median_queries").get<double>();
  est.seed = e.at("seed").get<std::uint64_t>();
  return est;
}

}  // namespace oran_aml::app
