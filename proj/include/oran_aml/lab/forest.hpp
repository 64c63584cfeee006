#pragma once

// Random forest of axis-aligned Gini trees.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "oran_aml/error.hpp"
#include "oran_aml/lab/seed.hpp"

namespace oran_aml::lab {

struct Matrix {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t n_classes = 0;
  std::vector<std::string> feature_names;

  std::size_t size() const { return rows.size(); }
  std::size_t dims() const { return rows.empty() ? feature_names.size() : rows.front().size(); }
};

struct ForestParams {
  std::size_t n_trees = 50;
  std::size_t max_depth = 8;
  /// Features tried per split; 0 means floor(sqrt(d)).
  std::size_t max_features = 0;
  std::size_t min_samples_split = 2;
  bool bootstrap = true;
};

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  int left = -1;   // x[feature] <= threshold
  int right = -1;  // x[feature] >  threshold
  std::vector<std::uint32_t> histogram;

  bool leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  /// Leaf argmax; ties go to the lowest class index.
  int predict(const std::vector<double>& x) const {
    int at = 0;
    while (!nodes[static_cast<std::size_t>(at)].leaf()) {
      const auto& n = nodes[static_cast<std::size_t>(at)];
      at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    const auto& h = nodes[static_cast<std::size_t>(at)].histogram;
    return static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
  }

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestParams params;
  std::uint64_t seed = 0;
  std::size_t n_classes = 0;
  std::vector<std::string> feature_names;

  std::vector<std::size_t> votes(const std::vector<double>& x) const {
    if (x.size() != feature_names.size())
      throw Error("sample has " + std::to_string(x.size()) + " features, model expects " +
                  std::to_string(feature_names.size()));
    std::vector<std::size_t> v(n_classes, 0);
    for (const auto& t : trees) ++v[static_cast<std::size_t>(t.predict(x))];
    return v;
  }

  /// Majority vote; ties go to the lowest class index.
  int predict(const std::vector<double>& x) const {
    const auto v = votes(x);
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  }
};

namespace detail {

inline double gini(const std::vector<std::uint32_t>& h, double n) {
  if (n <= 0) return 0.0;
  double s = 0.0;
  for (auto c : h) s += (c / n) * (c / n);
  return 1.0 - s;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& data, const ForestParams& p, std::uint64_t seed)
      : data_(data), params_(p), rng_(seed) {
    const std::size_t d = data.dims();
    mtry_ = p.max_features ? std::min(p.max_features, d)
                           : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(double(d)))));
    features_.resize(d);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  DecisionTree build() {
    std::vector<std::size_t> idx(data_.size());
    if (params_.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
      for (auto& i : idx) i = pick(rng_);
    } else {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
    }
    grow(idx, 0);
    return std::move(tree_);
  }

 private:
  std::vector<std::uint32_t> histogram(const std::vector<std::size_t>& idx) const {
    std::vector<std::uint32_t> h(data_.n_classes, 0);
    for (auto i : idx) ++h[static_cast<std::size_t>(data_.labels[i])];
    return h;
  }

  int grow(std::vector<std::size_t>& idx, std::size_t depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back({});
    auto h = histogram(idx);
    const bool pure = std::count_if(h.begin(), h.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || depth >= params_.max_depth || idx.size() < params_.min_samples_split) {
      tree_.nodes[static_cast<std::size_t>(id)].histogram = std::move(h);
      return id;
    }

    // Partial Fisher-Yates for the feature subset.
    for (std::size_t k = 0; k < mtry_; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, features_.size() - 1);
      std::swap(features_[k], features_[pick(rng_)]);
    }
    const double n = static_cast<double>(idx.size());
    double best_score = gini(h, n);
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order(idx);
    for (std::size_t k = 0; k < mtry_; ++k) {
      const std::size_t f = features_[k];
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return data_.rows[a][f] < data_.rows[b][f]; });
      std::vector<std::uint32_t> left(data_.n_classes, 0), right = h;
      for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
        const int y = data_.labels[order[pos]];
        ++left[static_cast<std::size_t>(y)];
        --right[static_cast<std::size_t>(y)];
        const double a = data_.rows[order[pos]][f], b = data_.rows[order[pos + 1]][f];
        if (!(a < b)) continue;
        const double nl = static_cast<double>(pos + 1), nr = n - nl;
        const double score = (nl * gini(left, nl) + nr * gini(right, nr)) / n;
        if (score < best_score - 1e-15) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = a + (b - a) / 2.0;
          if (!(best_threshold < b)) best_threshold = a;
        }
      }
    }
    if (best_feature < 0) {
      tree_.nodes[static_cast<std::size_t>(id)].histogram = std::move(h);
      return id;
    }

    std::vector<std::size_t> l, r;
    for (auto i : idx) (data_.rows[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? l : r).push_back(i);
    idx.clear();
    idx.shrink_to_fit();
    tree_.nodes[static_cast<std::size_t>(id)].feature = best_feature;
    tree_.nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
    tree_.nodes[static_cast<std::size_t>(id)].histogram = std::move(h);
    const int li = grow(l, depth + 1);
    const int ri = grow(r, depth + 1);
    tree_.nodes[static_cast<std::size_t>(id)].left = li;
    tree_.nodes[static_cast<std::size_t>(id)].right = ri;
    return id;
  }

  const Matrix& data_;
  ForestParams params_;
  std::mt19937_64 rng_;
  std::size_t mtry_ = 1;
  std::vector<std::size_t> features_;
  DecisionTree tree_;
};

}  // namespace detail

/// Each tree draws its bootstrap sample and feature subsets from its own
/// stream derived from `seed` and the tree index.
inline ForestModel train_forest(const Matrix& data, const ForestParams& params, std::uint64_t seed) {
  if (data.size() == 0) throw Error("cannot train on an empty dataset");
  if (data.labels.size() != data.size()) throw Error("label count does not match row count");
  if (params.n_trees == 0) throw Error("forest needs at least one tree");
  for (const auto& row : data.rows)
    if (row.size() != data.dims()) throw Error("ragged feature matrix");
  for (int y : data.labels)
    if (y < 0 || static_cast<std::size_t>(y) >= data.n_classes) throw Error("label out of range");
  ForestModel m;
  m.params = params;
  m.seed = seed;
  m.n_classes = data.n_classes;
  m.feature_names = data.feature_names;
  if (m.feature_names.empty())
    for (std::size_t i = 0; i < data.dims(); ++i) m.feature_names.push_back("f" + std::to_string(i));
  for (std::size_t t = 0; t < params.n_trees; ++t)
    m.trees.push_back(detail::TreeBuilder(data, params, derive_seed(seed, t)).build());
  return m;
}

inline double accuracy(const ForestModel& m, const Matrix& data) {
  if (data.size() == 0) return 0.0;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < data.size(); ++i) ok += m.predict(data.rows[i]) == data.labels[i];
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

inline nlohmann::json encode_forest(const ForestModel& m) {
  using nlohmann::json;
  json trees = json::array();
  for (const auto& t : m.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      nodes.push_back(n.leaf() ? json{{"histogram", n.histogram}}
                               : json{{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                                      {"right", n.right}, {"histogram", n.histogram}});
    }
    trees.push_back(std::move(nodes));
  }
  return {{"n_trees", m.params.n_trees},
          {"max_depth", m.params.max_depth},
          {"max_features", m.params.max_features},
          {"min_samples_split", m.params.min_samples_split},
          {"bootstrap", m.params.bootstrap},
          {"seed", m.seed},
          {"n_classes", m.n_classes},
          {"feature_names", m.feature_names},
          {"trees", trees}};
}

inline ForestModel decode_forest(const nlohmann::json& doc) {
  try {
    ForestModel m;
    m.params.n_trees = doc.at("n_trees").get<std::size_t>();
    m.params.max_depth = doc.at("max_depth").get<std::size_t>();
    m.params.max_features = doc.at("max_features").get<std::size_t>();
    m.params.min_samples_split = doc.at("min_samples_split").get<std::size_t>();
    m.params.bootstrap = doc.at("bootstrap").get<bool>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.n_classes = doc.at("n_classes").get<std::size_t>();
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    for (const auto& nodes : doc.at("trees")) {
      DecisionTree t;
      for (const auto& n : nodes) {
        TreeNode node;
        node.histogram = n.at("histogram").get<std::vector<std::uint32_t>>();
        if (n.contains("feature")) {
          node.feature = n.at("feature").get<int>();
          node.threshold = n.at("threshold").get<double>();
          node.left = n.at("left").get<int>();
          node.right = n.at("right").get<int>();
        }
        t.nodes.push_back(std::move(node));
      }
      m.trees.push_back(std::move(t));
    }
    for (const auto& t : m.trees) {
      const int count = static_cast<int>(t.nodes.size());
      if (count == 0) throw ParseError("forest: empty tree");
      for (int i = 0; i < count; ++i) {
        const auto& n = t.nodes[static_cast<std::size_t>(i)];
        if (n.histogram.size() != m.n_classes) throw ParseError("forest: histogram size mismatch");
        if (n.leaf()) continue;
        if (static_cast<std::size_t>(n.feature) >= m.feature_names.size() || n.left <= i || n.right <= i ||
            n.left >= count || n.right >= count)
          throw ParseError("forest: malformed node");
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("forest: ") + e.what());
  }
}

}  // namespace oran_aml::lab
