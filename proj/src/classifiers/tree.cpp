// Copyright 2026 The hopebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "classifiers/check.hpp"
#include "classifiers/grow.hpp"

namespace hopebench::classifiers {

namespace detail {

ColumnIndex::ColumnIndex(const FeatureMatrix& X) : columns(X.dim) {
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto& x = X.rows[i];
    for (std::size_t k = 0; k < x.size(); ++k) {
      columns[x.indices[k]].emplace_back(static_cast<std::uint32_t>(i), x.values[k]);
    }
  }
}

namespace {

// Weighted Gini impurity times node weight: W - sum(c^2) / W.
double weighted_gini(std::span<const double> counts) {
  double total = 0.0;
  double sq = 0.0;
  for (double c : counts) {
    total += c;
    sq += c * c;
  }
  return total > 0.0 ? total - sq / total : 0.0;
}

struct Entry {
  std::uint32_t feature;
  double value;
  std::uint32_t row;
};

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = std::numeric_limits<double>::infinity();
};

class TreeGrower {
 public:
  TreeGrower(const FeatureMatrix& X, std::span<const int> y, std::span<const double> weights,
             const TreeConfig& config, std::size_t num_classes, const ColumnIndex* columns,
             Rng* rng)
      : X_(X),
        y_(y),
        weights_(weights),
        config_(config),
        classes_(num_classes),
        columns_(columns),
        rng_(rng),
        node_of_(X.size(), -1) {}

  TreeModel grow() {
    TreeModel tree;
    tree.config = config_;
    tree.feature_dim = X_.dim;
    tree.classes = classes_;

    std::vector<std::uint32_t> root;
    for (std::size_t i = 0; i < X_.size(); ++i) {
      if (weights_[i] > 0.0) root.push_back(static_cast<std::uint32_t>(i));
    }
    struct Pending {
      int node;
      int depth;
      std::vector<std::uint32_t> rows;
    };
    std::vector<Pending> stack;
    tree.nodes.push_back(make_node(root));
    stack.push_back({0, 0, std::move(root)});

    while (!stack.empty()) {
      Pending current = std::move(stack.back());
      stack.pop_back();
      const auto& counts = tree.nodes[current.node].class_counts;
      const bool pure = std::count_if(counts.begin(), counts.end(),
                                      [](double c) { return c > 0.0; }) <= 1;
      if (pure || current.depth >= config_.max_depth ||
          current.rows.size() < static_cast<std::size_t>(std::max(config_.min_samples_split, 2))) {
        continue;
      }
      for (auto r : current.rows) node_of_[r] = current.node;
      const Split split = find_split(current.node, current.rows, counts);
      if (split.feature < 0) continue;

      std::vector<std::uint32_t> left;
      std::vector<std::uint32_t> right;
      for (auto r : current.rows) {
        (value_of(r, static_cast<std::uint32_t>(split.feature)) <= split.threshold ? left : right)
            .push_back(r);
      }
      const int left_id = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(make_node(left));
      const int right_id = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(make_node(right));
      auto& node = tree.nodes[current.node];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left_id;
      node.right = right_id;
      // Right is pushed first so the left subtree is grown first.
      stack.push_back({right_id, current.depth + 1, std::move(right)});
      stack.push_back({left_id, current.depth + 1, std::move(left)});
    }
    return tree;
  }

 private:
  TreeNode make_node(std::span<const std::uint32_t> rows) const {
    TreeNode node;
    node.class_counts.assign(classes_, 0.0);
    for (auto r : rows) node.class_counts[y_[r]] += weights_[r];
    return node;
  }

  double value_of(std::uint32_t row, std::uint32_t feature) const {
    const auto& x = X_.rows[row];
    auto it = std::lower_bound(x.indices.begin(), x.indices.end(), feature);
    if (it == x.indices.end() || *it != feature) return 0.0;
    return x.values[static_cast<std::size_t>(it - x.indices.begin())];
  }

  // Best threshold of one feature given its nonzero entries in the node,
  // sorted by value. Updates `best` on strict improvement only.
  void scan_feature(std::uint32_t feature, std::span<const Entry> entries,
                    std::span<const double> node_counts, std::size_t node_rows, Split& best) {
    if (entries.empty()) return;
    // Constant when every row is nonzero with one shared value.
    if (entries.size() == node_rows && entries.front().value == entries.back().value) return;

    std::vector<double> zero_counts(node_counts.begin(), node_counts.end());
    for (const auto& e : entries) zero_counts[y_[e.row]] -= weights_[e.row];
    double zero_weight = 0.0;
    for (double& c : zero_counts) {
      if (c < 1e-12) c = 0.0;  // cancellation noise
      zero_weight += c;
    }
    const bool has_zero = entries.size() < node_rows;

    // Groups of equal values in ascending order, with the implicit zero
    // group slotted in by value.
    struct Group {
      double value;
      std::vector<double> counts;
    };
    std::vector<Group> groups;
    bool zero_placed = !has_zero;
    auto place_zero = [&] {
      groups.push_back({0.0, zero_counts});
      zero_placed = true;
    };
    for (std::size_t i = 0; i < entries.size();) {
      const double v = entries[i].value;
      if (!zero_placed && v > 0.0) place_zero();
      Group g{v, std::vector<double>(classes_, 0.0)};
      for (; i < entries.size() && entries[i].value == v; ++i) {
        g.counts[y_[entries[i].row]] += weights_[entries[i].row];
      }
      groups.push_back(std::move(g));
    }
    if (!zero_placed) place_zero();
    (void)zero_weight;

    std::vector<double> left(classes_, 0.0);
    std::vector<double> right(node_counts.begin(), node_counts.end());
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
      for (std::size_t c = 0; c < classes_; ++c) {
        left[c] += groups[g].counts[c];
        right[c] -= groups[g].counts[c];
      }
      const double score = weighted_gini(left) + weighted_gini(right);
      if (score < best.score) {
        const double a = groups[g].value;
        const double b = groups[g + 1].value;
        double threshold = a / 2.0 + b / 2.0;
        if (threshold >= b || threshold < a) threshold = a;
        best = {static_cast<int>(feature), threshold, score};
      }
    }
  }

  Split find_split(int node, std::span<const std::uint32_t> rows,
                   std::span<const double> node_counts) {
    Split best;
    if (config_.max_features == 0 || config_.max_features >= X_.dim) {
      std::vector<Entry> entries;
      for (auto r : rows) {
        const auto& x = X_.rows[r];
        for (std::size_t k = 0; k < x.size(); ++k) entries.push_back({x.indices[k], x.values[k], r});
      }
      std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.feature != b.feature ? a.feature < b.feature : a.value < b.value;
      });
      for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        while (j < entries.size() && entries[j].feature == entries[i].feature) ++j;
        scan_feature(entries[i].feature, std::span(entries).subspan(i, j - i), node_counts,
                     rows.size(), best);
        i = j;
      }
      return best;
    }
    return find_sampled_split(node, rows, node_counts);
  }

  std::vector<Entry> column_entries(std::uint32_t feature, int node) const {
    std::vector<Entry> out;
    for (const auto& [row, value] : columns_->columns[feature]) {
      if (node_of_[row] == node) out.push_back({feature, value, row});
    }
    std::sort(out.begin(), out.end(),
              [](const Entry& a, const Entry& b) { return a.value < b.value; });
    return out;
  }

  bool is_constant(std::span<const Entry> entries, std::size_t node_rows) const {
    return entries.empty() ||
           (entries.size() == node_rows && entries.front().value == entries.back().value);
  }

  // Draws features uniformly without replacement until max_features have been
  // drawn and at least one of them varies within the node. When the first
  // max_features draws are all constant, the next varying feature in a random
  // order is uniform over the varying features not drawn yet, so it is
  // sampled from them directly.
  Split find_sampled_split(int node, std::span<const std::uint32_t> rows,
                           std::span<const double> node_counts) {
    const auto dim = static_cast<std::uint32_t>(X_.dim);
    std::unordered_map<std::uint32_t, std::uint32_t> swapped;
    auto slot = [&](std::uint32_t i) {
      auto it = swapped.find(i);
      return it == swapped.end() ? i : it->second;
    };
    std::vector<std::pair<std::uint32_t, std::vector<Entry>>> candidates;
    const auto draws = static_cast<std::uint32_t>(std::min<std::size_t>(config_.max_features, dim));
    for (std::uint32_t t = 0; t < draws; ++t) {
      const auto r = t + static_cast<std::uint32_t>(rng_->below(dim - t));
      const std::uint32_t feature = slot(r);
      swapped[r] = slot(t);
      swapped[t] = feature;
      auto entries = column_entries(feature, node);
      if (!is_constant(entries, rows.size())) candidates.emplace_back(feature, std::move(entries));
    }
    if (candidates.empty()) {
      std::vector<std::uint32_t> present;
      for (auto r : rows) {
        const auto& x = X_.rows[r];
        present.insert(present.end(), x.indices.begin(), x.indices.end());
      }
      std::sort(present.begin(), present.end());
      present.erase(std::unique(present.begin(), present.end()), present.end());
      std::vector<std::pair<std::uint32_t, std::vector<Entry>>> varying;
      for (auto feature : present) {
        auto entries = column_entries(feature, node);
        if (!is_constant(entries, rows.size())) varying.emplace_back(feature, std::move(entries));
      }
      if (varying.empty()) return {};
      candidates.push_back(std::move(varying[rng_->below(varying.size())]));
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Split best;
    for (const auto& [feature, entries] : candidates) {
      scan_feature(feature, entries, node_counts, rows.size(), best);
    }
    return best;
  }

  const FeatureMatrix& X_;
  std::span<const int> y_;
  std::span<const double> weights_;
  TreeConfig config_;
  std::size_t classes_;
  const ColumnIndex* columns_;
  Rng* rng_;
  std::vector<int> node_of_;
};

}  // namespace

TreeModel grow_tree(const FeatureMatrix& X, std::span<const int> y,
                    std::span<const double> weights, const TreeConfig& config,
                    std::size_t num_classes, const ColumnIndex* columns, Rng* rng) {
  if (config.max_features > 0 && config.max_features < X.dim && (!columns || !rng)) {
    throw ValidationError("feature subsampling needs a column index and a generator");
  }
  return TreeGrower(X, y, weights, config, num_classes, columns, rng).grow();
}

}  // namespace detail

TreeModel fit_tree(const FeatureMatrix& X, std::span<const int> y, const TreeConfig& config,
                   std::size_t num_classes) {
  detail::check_training_set(X, y, num_classes, "fit_tree");
  if (X.size() == 0) throw ValidationError("fit_tree: empty training set");
  if (config.max_depth < 0) throw ValidationError("fit_tree: max_depth must be >= 0");
  if (config.max_features != 0 && config.max_features < X.dim) {
    throw ValidationError("fit_tree: feature subsampling is only available through fit_forest");
  }
  const std::vector<double> weights(X.size(), 1.0);
  return detail::grow_tree(X, y, weights, config, num_classes, nullptr, nullptr);
}

int TreeModel::depth() const {
  if (nodes.empty()) return 0;
  int deepest = 0;
  std::vector<std::pair<int, int>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[id].is_leaf()) {
      stack.emplace_back(nodes[id].left, d + 1);
      stack.emplace_back(nodes[id].right, d + 1);
    }
  }
  return deepest;
}

int TreeModel::leaf_of(const SparseVector& x) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const auto& node = nodes[id];
    const auto f = static_cast<std::uint32_t>(node.feature);
    auto it = std::lower_bound(x.indices.begin(), x.indices.end(), f);
    const double v = (it != x.indices.end() && *it == f)
                         ? x.values[static_cast<std::size_t>(it - x.indices.begin())]
                         : 0.0;
    id = v <= node.threshold ? node.left : node.right;
  }
  return id;
}

ProbaMatrix predict_proba(const TreeModel& m, const FeatureMatrix& X) {
  check_dimension(X, m.dim());
  ProbaMatrix out(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto& counts = m.nodes[m.leaf_of(X.rows[i])].class_counts;
    double total = 0.0;
    for (double c : counts) total += c;
    out[i].resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c) out[i][c] = counts[c] / total;
  }
  return out;
}

}  // namespace hopebench::classifiers
