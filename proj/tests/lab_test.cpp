#include <gtest/gtest.h>
#include <gmock/gmock.h>

#include "lab_checks.hpp"
#include "oran_aml/lab/effectiveness.hpp"
#include "oran_aml/lab/forest.hpp"
#include "oran_aml/lab/kpi.hpp"

using namespace oran_aml;
using namespace oran_aml::lab;

namespace {

DecisionOracle threshold_oracle(double cut) {
  return [cut](const Point& x) { return x[0] > cut ? 1 : 0; };
}

Matrix toy_matrix() {
  Matrix m;
  m.n_classes = 2;
  m.feature_names = {"a", "b"};
  for (int i = 0; i < 40; ++i) {
    const double a = i / 40.0;
    m.rows.push_back({a, (i * 7 % 13) / 13.0});
    m.labels.push_back(a > 0.5 ? 1 : 0);
  }
  return m;
}

}  // namespace

TEST(Hsja, OneDimensionalBoundary) {
  const Box box{{-5.0}, {5.0}};
  HsjaParams p;
  p.seed = 3;
  const auto t = hop_skip_jump(threshold_oracle(0.0), {-1.0}, {4.0}, box, p);
  ASSERT_TRUE(t.success);
  EXPECT_GT(t.best[0], 0.0);
  EXPECT_NEAR(t.best_distance, 1.0, 2.0 * p.theta * 5.0);
}

TEST(Hsja, LinearMedianAndAccounting) {
  const auto rep = testsupport::check_hsja_linear(50);
  EXPECT_TRUE(rep.all_found);
  EXPECT_LE(rep.median, 1.1 * 2.0);
  EXPECT_GE(rep.median, 2.0);
  EXPECT_LE(rep.max_queries, 25000u);
  EXPECT_TRUE(rep.monotone);
  EXPECT_TRUE(rep.accounted);
  EXPECT_TRUE(rep.replay_valid);
}

TEST(Hsja, RejectsNonAdversarialInit) {
  const Box box{{-5.0, -5.0}, {5.0, 5.0}};
  EXPECT_THROW(hop_skip_jump(testsupport::linear_oracle(), {0.0, 0.0}, {1.0, 0.0}, box, {}), Error);
}

TEST(Hsja, BudgetStopsCleanly) {
  const Box box{{-10.0, -10.0}, {10.0, 10.0}};
  for (std::size_t budget : {0u, 1u, 2u, 7u, 150u, 1000u}) {
    HsjaParams p;
    p.query_budget = budget;
    std::size_t calls = 0;
    const auto base = testsupport::linear_oracle();
    DecisionOracle counted = [&](const Point& x) {
      ++calls;
      return base(x);
    };
    const auto t = hop_skip_jump(counted, {0.0, 0.0}, {6.0, 1.0}, box, p);
    EXPECT_EQ(calls, t.queries) << budget;
    EXPECT_LE(t.queries, budget);
    if (budget < 1000) {
      EXPECT_TRUE(t.budget_exhausted) << budget;
    }
    if (t.success) {
      EXPECT_EQ(base(t.best), 1);
    }
  }
}

TEST(Hsja, SameSeedSameTrace) {
  const Box box{{-10.0, -10.0}, {10.0, 10.0}};
  HsjaParams p;
  p.seed = 99;
  const auto a = hop_skip_jump(testsupport::linear_oracle(), {0.0, 0.0}, {6.0, 4.0}, box, p);
  const auto b = hop_skip_jump(testsupport::linear_oracle(), {0.0, 0.0}, {6.0, 4.0}, box, p);
  EXPECT_EQ(encode_trace(a).dump(), encode_trace(b).dump());
}

TEST(Hsja, ParamValidation) {
  HsjaParams p;
  p.theta = 0.0;
  EXPECT_THROW(validate_params(p), Error);
  p = {};
  p.max_iterations = 0;
  EXPECT_THROW(validate_params(p), Error);
}

TEST(Wilson, KnownValues) {
  const auto w = wilson_interval(20, 25);
  EXPECT_NEAR(w.low, 0.6087, 1e-4);
  EXPECT_NEAR(w.high, 0.9114, 1e-4);
  const auto all = wilson_interval(25, 25);
  EXPECT_DOUBLE_EQ(all.high, 1.0);
  EXPECT_LT(all.low, 1.0);
  EXPECT_DOUBLE_EQ(wilson_interval(0, 10).low, 0.0);
  EXPECT_THROW(wilson_interval(0, 0), Error);
}

namespace {

PairPool toy_pool() {
  PairPool pool;
  for (int i = 0; i < 10; ++i) pool.points.push_back({-1.0 - 0.1 * i, 0.2 * i - 1.0});
  for (int i = 0; i < 10; ++i) pool.points.push_back({3.0 + 0.1 * i, 1.0 - 0.2 * i});
  for (std::size_t i = 0; i < 10; ++i) pool.sources.push_back(i);
  for (std::size_t i = 10; i < 20; ++i) pool.inits.push_back(i);
  return pool;
}

}  // namespace

TEST(Effectiveness, ToyDisagreementAlwaysSucceeds) {
  EstimateConfig cfg;
  cfg.technique = "toy";
  cfg.trials = 20;
  cfg.seed = 5;
  const Box box{{-5.0, -5.0}, {5.0, 5.0}};
  const auto est = estimate_effectiveness(threshold_oracle(0.0), threshold_oracle(1.0), toy_pool(), box, cfg);
  EXPECT_EQ(est.successes, 20u);
  EXPECT_DOUBLE_EQ(est.success_rate, 1.0);
}

TEST(Effectiveness, ZeroTrialsAndZeroBudget) {
  const Box box{{-5.0, -5.0}, {5.0, 5.0}};
  EstimateConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(estimate_effectiveness(threshold_oracle(0.0), threshold_oracle(1.0), toy_pool(), box, cfg), Error);
  cfg.trials = 10;
  cfg.hsja.query_budget = 0;
  const auto est = estimate_effectiveness(threshold_oracle(0.0), threshold_oracle(1.0), toy_pool(), box, cfg);
  EXPECT_EQ(est.success_rate, 0.0);
  EXPECT_EQ(est.median_queries, 0.0);
}

TEST(Effectiveness, EmptyPoolRaises) {
  const Box box{{-5.0, -5.0}, {5.0, 5.0}};
  PairPool pool = toy_pool();
  pool.inits.clear();
  EXPECT_THROW(estimate_effectiveness(threshold_oracle(0.0), threshold_oracle(1.0), pool, box, {}), Error);
}

TEST(Effectiveness, SequentialEqualsParallel) {
  const Box box{{-5.0, -5.0}, {5.0, 5.0}};
  EstimateConfig cfg;
  cfg.technique = "toy";
  cfg.trials = 16;
  cfg.seed = 11;
  const auto seq = estimate_effectiveness(threshold_oracle(0.0), threshold_oracle(0.5), toy_pool(), box, cfg);
  cfg.threads = 6;
  const auto par = estimate_effectiveness(threshold_oracle(0.0), threshold_oracle(0.5), toy_pool(), box, cfg);
  EXPECT_EQ(encode_estimate(seq).dump(), encode_estimate(par).dump());
}

TEST(Effectiveness, MergeProducesOverrideDocument) {
  EffectivenessEstimate e;
  e.technique = "AT2.2";
  e.trials = 4;
  e.successes = 3;
  e.success_rate = 0.75;
  auto doc = merge_estimate(nlohmann::json::object(), e);
  EXPECT_DOUBLE_EQ(doc["estimates"]["AT2.2"]["success_rate"].get<double>(), 0.75);
  EXPECT_FALSE(doc["estimates"]["AT2.2"].contains("outcomes"));
  e.success_rate = 0.5;
  doc = merge_estimate(doc, e);
  EXPECT_DOUBLE_EQ(doc["estimates"]["AT2.2"]["success_rate"].get<double>(), 0.5);
}

TEST(Generator, DeterministicPerSeed) {
  const GeneratorConfig cfg;
  EXPECT_EQ(dataset_csv(generate_dataset(cfg, 300, 4)), dataset_csv(generate_dataset(cfg, 300, 4)));
  EXPECT_NE(dataset_csv(generate_dataset(cfg, 300, 4)), dataset_csv(generate_dataset(cfg, 300, 5)));
}

TEST(Generator, ClassSharesAndLabels) {
  const GeneratorConfig cfg;
  const auto data = generate_dataset(cfg, 10000, 17);
  std::array<std::size_t, kQoEClassCount> counts{};
  for (const auto& row : data) {
    ++counts[static_cast<std::size_t>(row.label)];
    EXPECT_EQ(expert_label(row.sample, cfg.policy), row.label);
    EXPECT_TRUE(valid_sample(row.sample));
  }
  for (std::size_t c = 0; c < kQoEClassCount; ++c)
    EXPECT_NEAR(static_cast<double>(counts[c]) / 10000.0, cfg.components[c].weight, 0.05);
}

TEST(Generator, UnreachableClassRaises) {
  GeneratorConfig cfg;
  cfg.components[0].sinr = {-15.0, 0.5};
  cfg.max_attempts = 50;
  EXPECT_THROW(generate_dataset(cfg, 100, 1), Error);
  GeneratorConfig bad;
  bad.components[0].weight = 0.5;
  EXPECT_THROW(generate_dataset(bad, 10, 1), Error);
}

TEST(Labeling, CascadeAndBoundaries) {
  EXPECT_EQ(expert_label(20.0, -80.0, 0.30), QoEClass::Excellent);
  EXPECT_EQ(expert_label(19.99, -80.0, 0.30), QoEClass::Good);
  EXPECT_EQ(expert_label(30.0, -60.0, 0.04), QoEClass::Poor);
  EXPECT_EQ(expert_label(5.0, -60.0, 0.9), QoEClass::Average);
  LabelingPolicy p;
  EXPECT_TRUE(p.well_ordered());
  p.rsrp = {-80.0, -80.0, -110.0};
  EXPECT_FALSE(p.well_ordered());
}

TEST(Forest, SingleClassAndTies) {
  Matrix m = toy_matrix();
  for (auto& y : m.labels) y = 1;
  const auto model = train_forest(m, {}, 1);
  EXPECT_EQ(model.predict({0.1, 0.1}), 1);
  for (const auto& t : model.trees) EXPECT_EQ(t.nodes.size(), 1u);

  DecisionTree tie;
  tie.nodes.push_back({-1, 0.0, -1, -1, {3, 3}});
  EXPECT_EQ(tie.predict({0.0, 0.0}), 0);
  ForestModel two;
  two.n_classes = 2;
  two.feature_names = {"a", "b"};
  DecisionTree one;
  one.nodes.push_back({-1, 0.0, -1, -1, {0, 1}});
  DecisionTree zero;
  zero.nodes.push_back({-1, 0.0, -1, -1, {1, 0}});
  two.trees = {one, zero};
  EXPECT_EQ(two.predict({0.0, 0.0}), 0);
}

TEST(Forest, LearnsAndRoundTrips) {
  const Matrix m = toy_matrix();
  const auto model = train_forest(m, {}, 8);
  EXPECT_GE(accuracy(model, m), 0.95);
  const auto back = decode_forest(encode_forest(model));
  EXPECT_EQ(back.trees, model.trees);
  EXPECT_EQ(encode_forest(back).dump(), encode_forest(model).dump());
  EXPECT_EQ(encode_forest(train_forest(m, {}, 8)).dump(), encode_forest(model).dump());
}

TEST(Forest, DimensionMismatchAndBadDocuments) {
  const auto model = train_forest(toy_matrix(), {}, 8);
  EXPECT_THROW(model.predict({0.1}), Error);
  auto doc = encode_forest(model);
  doc["trees"][0][0]["left"] = 0;
  EXPECT_THROW(decode_forest(doc), ParseError);
  doc = encode_forest(model);
  doc.erase("n_classes");
  EXPECT_THROW(decode_forest(doc), ParseError);
  EXPECT_THROW(train_forest(Matrix{}, {}, 1), Error);
}

TEST(TrafficSteering, NormalizationRoundTrip) {
  const auto& b = kpi_bounds();
  const Point mid = denormalize(Point(kFeatureCount, 0.5));
  for (std::size_t i = 0; i < kFeatureCount; ++i) EXPECT_DOUBLE_EQ(mid[i], (b.lower[i] + b.upper[i]) / 2.0);
  const Point x = normalize(b.upper);
  for (double v : x) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(TrafficSteering, DemoMeetsTargets) {
  const auto& r = testsupport::default_demo();
  EXPECT_GE(r.holdout_accuracy, 0.90);
  EXPECT_EQ(r.estimate.trials, 25u);
  EXPECT_GE(r.estimate.success_rate, 0.8);
  for (std::size_t i = 0; i < r.estimate.outcomes.size(); ++i) {
    const auto& o = r.estimate.outcomes[i];
    EXPECT_LE(o.queries, 25000u);
    if (!o.success) continue;
    const auto view = describe_attack(r, i);
    EXPECT_EQ(view["adversarial_model"], "Poor");
    EXPECT_NE(view["adversarial_expert"], "Poor");
  }
}
