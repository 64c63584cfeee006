#pragma once

// Decision-based HopSkipJump attack (L2).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

#include "oran_aml/error.hpp"

namespace oran_aml::lab {

using Point = std::vector<double>;
/// Returns the predicted class of a point.
using DecisionOracle = std::function<int(const Point&)>;

struct Box {
  Point lower;
  Point upper;

  Point clip(Point x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::min(upper[i], std::max(lower[i], x[i]));
    return x;
  }
};

struct HsjaParams {
  std::size_t max_iterations = 40;
  std::size_t init_gradient_samples = 100;
  double theta = 1e-3;
  std::size_t query_budget = 25000;
  std::uint64_t seed = 0;
  /// Targeted mode: adversarial means "classified as target".
  std::optional<int> target;
  /// Step halvings before an iteration gives up on moving.
  int max_step_halvings = 60;
};

inline void validate_params(const HsjaParams& p) {
  if (p.max_iterations < 1) throw Error("hsja: max_iterations must be at least 1");
  if (p.init_gradient_samples < 1) throw Error("hsja: init_gradient_samples must be at least 1");
  if (!(p.theta > 0.0)) throw Error("hsja: theta must be positive");
}

struct HsjaIteration {
  Point boundary;
  Point direction;
  double step = 0.0;
  double distance = 0.0;       // current boundary point to source
  double best_distance = 0.0;  // best so far, non-increasing
  std::size_t queries = 0;     // cumulative
};

struct AttackTrace {
  Point source;
  int source_class = -1;
  Point initial;
  std::vector<HsjaIteration> iterations;
  Point best;
  double best_distance = std::numeric_limits<double>::infinity();
  std::size_t queries = 0;
  bool success = false;
  bool budget_exhausted = false;
};

inline double l2(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

namespace detail {

class BudgetedOracle {
 public:
  BudgetedOracle(const DecisionOracle& f, std::size_t budget) : f_(f), budget_(budget) {}

  std::optional<int> operator()(const Point& x) {
    if (used_ >= budget_) {
      exhausted_ = true;
      return std::nullopt;
    }
    ++used_;
    return f_(x);
  }

  std::size_t used() const { return used_; }
  std::size_t remaining() const { return budget_ - used_; }
  bool exhausted() const { return exhausted_; }

 private:
  const DecisionOracle& f_;
  std::size_t budget_;
  std::size_t used_ = 0;
  bool exhausted_ = false;
};

inline Point blend(const Point& a, const Point& b, double lambda) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - lambda) * a[i] + lambda * b[i];
  return out;
}

}  // namespace detail

/// `source` is classified by the oracle first (one query); `init` must then
/// be adversarial. Every point stored in the trace was confirmed adversarial
/// by an oracle query. Stops cleanly when the budget runs out.
inline AttackTrace hop_skip_jump(const DecisionOracle& oracle, const Point& source, const Point& init,
                                 const Box& box, const HsjaParams& params) {
  validate_params(params);
  const std::size_t d = source.size();
  if (init.size() != d || box.lower.size() != d || box.upper.size() != d) throw Error("hsja: dimension mismatch");

  AttackTrace trace;
  trace.source = source;
  trace.initial = init;
  detail::BudgetedOracle q(oracle, params.query_budget);
  auto finish = [&]() -> AttackTrace& {
    trace.queries = q.used();
    trace.budget_exhausted = q.exhausted();
    return trace;
  };

  const auto src_cls = q(source);
  if (!src_cls) return finish();
  trace.source_class = *src_cls;
  auto adversarial = [&](int cls) { return params.target ? cls == *params.target : cls != trace.source_class; };
  // nullopt when the budget is gone.
  auto is_adv = [&](const Point& x) -> std::optional<bool> {
    auto c = q(x);
    if (!c) return std::nullopt;
    return adversarial(*c);
  };

  const auto init_adv = is_adv(init);
  if (!init_adv) return finish();
  if (!*init_adv) throw Error("hsja: initial sample is not adversarial");

  // Boundary search on the segment source -> adv; returns the adversarial end.
  auto binary_search = [&](const Point& adv) -> std::optional<Point> {
    double lo = 0.0, hi = 1.0;
    Point best = adv;
    while (hi - lo > params.theta) {
      const double mid = (lo + hi) / 2.0;
      Point x = detail::blend(source, adv, mid);
      const auto r = is_adv(x);
      if (!r) return std::nullopt;
      if (*r) {
        hi = mid;
        best = std::move(x);
      } else {
        lo = mid;
      }
    }
    return best;
  };

  auto first = binary_search(init);
  if (!first) return finish();
  Point x = std::move(*first);
  double dist = l2(x, source);
  trace.best = x;
  trace.best_distance = dist;
  trace.success = true;

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (std::size_t t = 1; t <= params.max_iterations; ++t) {
    if (dist == 0.0) break;
    const std::size_t batch = params.init_gradient_samples *
                              static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(t))));
    const double delta = params.theta * std::sqrt(static_cast<double>(d)) * dist;

    // Monte Carlo estimate of the boundary normal.
    std::vector<Point> dirs;
    std::vector<double> signs;
    dirs.reserve(batch);
    bool out_of_budget = false;
    for (std::size_t b = 0; b < batch; ++b) {
      Point u(d);
      double norm = 0.0;
      for (auto& v : u) {
        v = gauss(rng);
        norm += v * v;
      }
      norm = std::sqrt(norm);
      Point probe(d);
      for (std::size_t i = 0; i < d; ++i) probe[i] = x[i] + delta * u[i] / norm;
      probe = box.clip(std::move(probe));
      for (std::size_t i = 0; i < d; ++i) u[i] = (probe[i] - x[i]) / delta;
      const auto r = is_adv(probe);
      if (!r) {
        out_of_budget = true;
        break;
      }
      dirs.push_back(std::move(u));
      signs.push_back(*r ? 1.0 : -1.0);
    }
    if (out_of_budget) break;
    double mean = 0.0;
    for (double s : signs) mean += s;
    mean /= static_cast<double>(signs.size());
    Point grad(d, 0.0);
    for (std::size_t b = 0; b < dirs.size(); ++b) {
      const double w = std::fabs(mean) == 1.0 ? signs[b] : signs[b] - mean;
      for (std::size_t i = 0; i < d; ++i) grad[i] += w * dirs[b][i];
    }
    double gnorm = 0.0;
    for (double v : grad) gnorm += v * v;
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0) continue;
    for (double& v : grad) v /= gnorm;

    // Geometric step search.
    double step = dist / std::sqrt(static_cast<double>(t));
    std::optional<Point> moved;
    for (int h = 0; h <= params.max_step_halvings; ++h, step /= 2.0) {
      Point cand(d);
      for (std::size_t i = 0; i < d; ++i) cand[i] = x[i] + step * grad[i];
      cand = box.clip(std::move(cand));
      const auto r = is_adv(cand);
      if (!r) {
        out_of_budget = true;
        break;
      }
      if (*r) {
        moved = std::move(cand);
        break;
      }
    }
    if (out_of_budget) break;
    if (!moved) continue;

    auto next = binary_search(*moved);
    if (!next) break;
    x = std::move(*next);
    dist = l2(x, source);
    if (dist < trace.best_distance) {
      trace.best = x;
      trace.best_distance = dist;
    }
    trace.iterations.push_back({x, grad, step, dist, trace.best_distance, q.used()});
  }
  return finish();
}

inline nlohmann::json encode_trace(const AttackTrace& t) {
  using nlohmann::json;
  json iters = json::array();
  for (const auto& it : t.iterations) {
    iters.push_back({{"boundary", it.boundary},
                     {"direction", it.direction},
                     {"step", it.step},
                     {"distance", it.distance},
                     {"best_distance", it.best_distance},
                     {"queries", it.queries}});
  }
  json doc = {{"source", t.source},        {"source_class", t.source_class}, {"initial", t.initial},
              {"iterations", iters},       {"queries", t.queries},           {"success", t.success},
              {"budget_exhausted", t.budget_exhausted}};
  if (t.success) {
    doc["best"] = t.best;
    doc["best_distance"] = t.best_distance;
  } else {
    doc["best"] = nullptr;
    doc["best_distance"] = nullptr;
  }
  return doc;
}

}  // namespace oran_aml::lab
