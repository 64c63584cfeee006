#pragma once

// End-to-end traffic-steering demo: synthetic KPIs, expert labels, forest
// QoE classifier and HopSkipJump evasion in a normalized feature space.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "oran_aml/lab/effectiveness.hpp"
#include "oran_aml/lab/forest.hpp"
#include "oran_aml/lab/kpi.hpp"

namespace oran_aml::lab {

inline Point normalize(const Point& raw) {
  const auto& b = kpi_bounds();
  Point out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - b.lower[i]) / (b.upper[i] - b.lower[i]);
  return out;
}

inline Point denormalize(const Point& unit) {
  const auto& b = kpi_bounds();
  Point out(unit.size());
  for (std::size_t i = 0; i < unit.size(); ++i) out[i] = b.lower[i] + unit[i] * (b.upper[i] - b.lower[i]);
  return out;
}

inline Box unit_box() { return {Point(kFeatureCount, 0.0), Point(kFeatureCount, 1.0)}; }

inline Matrix to_matrix(const Dataset& data) {
  Matrix m;
  m.n_classes = kQoEClassCount;
  for (auto name : feature_names()) m.feature_names.emplace_back(name);
  for (const auto& row : data) {
    m.rows.push_back(to_features(row.sample));
    m.labels.push_back(static_cast<int>(row.label));
  }
  return m;
}

struct DemoConfig {
  std::size_t n = 5000;
  std::uint64_t seed = 7;
  double holdout_fraction = 0.2;
  GeneratorConfig generator{};
  ForestParams forest{};
  HsjaParams hsja = [] {
    HsjaParams p;
    p.target = static_cast<int>(QoEClass::Poor);
    return p;
  }();
  QoEClass source_class = QoEClass::Excellent;
  std::size_t trials = 25;
  unsigned threads = 1;
  std::string technique = "AT2.2";
  bool keep_traces = true;
};

struct DemoResult {
  Dataset data;
  std::vector<std::size_t> train_index;
  std::vector<std::size_t> holdout_index;
  ForestModel model;
  double holdout_accuracy = 0.0;
  PairPool pool;
  EffectivenessEstimate estimate;
};

/// Oracles over normalized points.
inline DecisionOracle model_oracle(const ForestModel& m) {
  return [&m](const Point& x) { return m.predict(denormalize(x)); };
}

inline DecisionOracle expert_oracle(LabelingPolicy policy = {}) {
  return [policy](const Point& x) { return static_cast<int>(expert_label_features(denormalize(x), policy)); };
}

inline DemoResult run_demo(const DemoConfig& cfg) {
  DemoResult r;
  r.data = generate_dataset(cfg.generator, cfg.n, cfg.seed);

  std::vector<std::size_t> order(r.data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, 1));
  std::shuffle(order.begin(), order.end(), shuffle_rng);
  const auto n_hold = static_cast<std::size_t>(static_cast<double>(order.size()) * cfg.holdout_fraction);
  r.holdout_index.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_hold));
  r.train_index.assign(order.begin() + static_cast<std::ptrdiff_t>(n_hold), order.end());
  std::sort(r.holdout_index.begin(), r.holdout_index.end());
  std::sort(r.train_index.begin(), r.train_index.end());

  const Matrix all = to_matrix(r.data);
  Matrix train, hold;
  train.n_classes = hold.n_classes = all.n_classes;
  train.feature_names = hold.feature_names = all.feature_names;
  for (auto i : r.train_index) {
    train.rows.push_back(all.rows[i]);
    train.labels.push_back(all.labels[i]);
  }
  for (auto i : r.holdout_index) {
    hold.rows.push_back(all.rows[i]);
    hold.labels.push_back(all.labels[i]);
  }
  r.model = train_forest(train, cfg.forest, derive_seed(cfg.seed, 2));
  r.holdout_accuracy = accuracy(r.model, hold);

  // Sources: holdout rows the expert and the model both place in the source
  // class. Inits: holdout rows the model assigns to the target class.
  const int target = cfg.hsja.target.value_or(static_cast<int>(QoEClass::Poor));
  for (std::size_t k = 0; k < hold.size(); ++k) {
    const int predicted = r.model.predict(hold.rows[k]);
    r.pool.points.push_back(normalize(hold.rows[k]));
    if (hold.labels[k] == static_cast<int>(cfg.source_class) && predicted == hold.labels[k]) r.pool.sources.push_back(k);
    if (predicted == target) r.pool.inits.push_back(k);
  }

  EstimateConfig ec;
  ec.technique = cfg.technique;
  ec.trials = cfg.trials;
  ec.seed = derive_seed(cfg.seed, 3);
  ec.hsja = cfg.hsja;
  ec.threads = cfg.threads;
  ec.keep_traces = cfg.keep_traces;
  r.estimate = estimate_effectiveness(model_oracle(r.model), expert_oracle(cfg.generator.policy), r.pool, unit_box(), ec);
  return r;
}

/// Before/after view of one attack in raw KPI units.
inline nlohmann::json describe_attack(const DemoResult& r, std::size_t trial, const LabelingPolicy& policy = {}) {
  using nlohmann::json;
  const auto& o = r.estimate.outcomes.at(trial);
  const Point src = denormalize(r.pool.points[o.source_index]);
  json doc = {{"trial", trial},
              {"source", src},
              {"source_model", std::string(to_string(static_cast<QoEClass>(r.model.predict(src))))},
              {"source_expert", std::string(to_string(expert_label_features(src, policy)))},
              {"success", o.success},
              {"queries", o.queries}};
  if (trial < r.estimate.traces.size() && r.estimate.traces[trial].success) {
    const Point adv = denormalize(r.estimate.traces[trial].best);
    doc["adversarial"] = adv;
    doc["adversarial_model"] = std::string(to_string(static_cast<QoEClass>(r.model.predict(adv))));
    doc["adversarial_expert"] = std::string(to_string(expert_label_features(adv, policy)));
    doc["normalized_distance"] = r.estimate.traces[trial].best_distance;
  }
  doc["feature_names"] = r.model.feature_names;
  return doc;
}

}  // namespace oran_aml::lab
