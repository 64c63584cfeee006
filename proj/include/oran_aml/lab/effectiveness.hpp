#pragma once

// Empirical attack success rates from repeated HopSkipJump runs.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "oran_aml/lab/hsja.hpp"
#include "oran_aml/lab/seed.hpp"

namespace oran_aml::lab {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95) {
  if (trials == 0) throw Error("wilson interval needs at least one trial");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {successes == 0 ? 0.0 : std::max(0.0, center - half), successes == trials ? 1.0 : std::min(1.0, center + half)};
}

struct TrialOutcome {
  std::size_t source_index = 0;
  std::size_t init_index = 0;
  std::size_t queries = 0;
  bool adversarial_found = false;
  int model_class = -1;
  int expert_class = -1;
  bool success = false;
  double distance = 0.0;
};

struct EffectivenessEstimate {
  std::string technique;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  Interval wilson;
  double median_queries = 0.0;
  std::uint64_t seed = 0;
  std::vector<TrialOutcome> outcomes;
  /// Filled only when EstimateConfig::keep_traces is set.
  std::vector<AttackTrace> traces;
};

/// Candidate sources and adversarial starting points, as indices into a pool
/// of points.
struct PairPool {
  std::vector<Point> points;
  std::vector<std::size_t> sources;
  std::vector<std::size_t> inits;
};

struct EstimateConfig {
  std::string technique;
  std::size_t trials = 25;
  std::uint64_t seed = 0;
  HsjaParams hsja;  // seed is replaced per trial
  unsigned threads = 1;
  bool keep_traces = false;
};

/// Trial i draws its (source, init) pair and its attack seed from a stream
/// derived from (seed, i), so results do not depend on `threads`. Success
/// means an adversarial point was found and the expert labeler disagrees
/// with the model on it.
inline EffectivenessEstimate estimate_effectiveness(const DecisionOracle& model, const DecisionOracle& expert,
                                                    const PairPool& pool, const Box& box,
                                                    const EstimateConfig& cfg) {
  if (cfg.trials == 0) throw Error("estimate: trials must be at least 1");
  if (pool.sources.empty() || pool.inits.empty()) throw Error("estimate: no valid source/init pairs");

  std::vector<TrialOutcome> outcomes(cfg.trials);
  std::vector<AttackTrace> traces(cfg.keep_traces ? cfg.trials : 0);
  auto run_trial = [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(cfg.seed, i));
    TrialOutcome o;
    o.source_index = pool.sources[std::uniform_int_distribution<std::size_t>(0, pool.sources.size() - 1)(rng)];
    o.init_index = pool.inits[std::uniform_int_distribution<std::size_t>(0, pool.inits.size() - 1)(rng)];
    HsjaParams p = cfg.hsja;
    p.seed = rng();
    const AttackTrace t = hop_skip_jump(model, pool.points[o.source_index], pool.points[o.init_index], box, p);
    o.queries = t.queries;
    o.adversarial_found = t.success;
    if (t.success) {
      o.model_class = model(t.best);
      o.expert_class = expert(t.best);
      o.success = o.model_class != o.expert_class;
      o.distance = t.best_distance;
    }
    outcomes[i] = o;
    if (cfg.keep_traces) traces[i] = t;
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.trials)));
  if (threads == 1) {
    for (std::size_t i = 0; i < cfg.trials; ++i) run_trial(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < cfg.trials; i = next++) run_trial(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  EffectivenessEstimate est;
  est.technique = cfg.technique;
  est.trials = cfg.trials;
  est.seed = cfg.seed;
  std::vector<double> queries;
  for (const auto& o : outcomes) {
    est.successes += o.success;
    queries.push_back(static_cast<double>(o.queries));
  }
  est.success_rate = static_cast<double>(est.successes) / static_cast<double>(est.trials);
  est.wilson = wilson_interval(est.successes, est.trials);
  std::sort(queries.begin(), queries.end());
  const std::size_t m = queries.size() / 2;
  est.median_queries = queries.size() % 2 ? queries[m] : (queries[m - 1] + queries[m]) / 2.0;
  est.outcomes = std::move(outcomes);
  est.traces = std::move(traces);
  return est;
}

inline nlohmann::json encode_estimate(const EffectivenessEstimate& e) {
  using nlohmann::json;
  json outcomes = json::array();
  for (const auto& o : e.outcomes) {
    outcomes.push_back({{"source_index", o.source_index},
                        {"init_index", o.init_index},
                        {"queries", o.queries},
                        {"adversarial_found", o.adversarial_found},
                        {"model_class", o.model_class},
                        {"expert_class", o.expert_class},
                        {"success", o.success},
                        {"distance", o.distance}});
  }
  return {{"technique", e.technique},
          {"trials", e.trials},
          {"successes", e.successes},
          {"success_rate", e.success_rate},
          {"wilson_low", e.wilson.low},
          {"wilson_high", e.wilson.high},
          {"median_queries", e.median_queries},
          {"seed", e.seed},
          {"outcomes", outcomes}};
}

/// Adds or replaces the estimate for its technique in an estimates document
/// (`{"estimates": {"AT2.2": {...}}}`), the form the catalog loader reads
/// as effectiveness overrides.
inline nlohmann::json merge_estimate(nlohmann::json doc, const EffectivenessEstimate& e) {
  if (!doc.is_object()) doc = nlohmann::json::object();
  if (!doc.contains("estimates") || !doc["estimates"].is_object()) doc["estimates"] = nlohmann::json::object();
  nlohmann::json summary = encode_estimate(e);
  summary.erase("outcomes");
  summary.erase("technique");
  doc["estimates"][e.technique] = summary;
  return doc;
}

}  // namespace oran_aml::lab
