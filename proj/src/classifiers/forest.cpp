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

#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "classifiers/check.hpp"
#include "classifiers/grow.hpp"

namespace hopebench::classifiers {

namespace {

TreeModel fit_one(const FeatureMatrix& X, std::span<const int> y, const ForestConfig& config,
                  std::size_t num_classes, const detail::ColumnIndex& columns, int t) {
  Rng rng(derive_seed(config.seed, "forest/tree/" + std::to_string(t)));
  std::vector<double> weights(X.size(), config.bootstrap ? 0.0 : 1.0);
  if (config.bootstrap) {
    for (std::size_t i = 0; i < X.size(); ++i) weights[rng.below(X.size())] += 1.0;
  }
  TreeConfig tree_config;
  tree_config.max_depth = config.max_depth;
  tree_config.min_samples_split = config.min_samples_split;
  if (config.max_features == MaxFeatures::Sqrt) {
    tree_config.max_features = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(X.dim)))));
  }
  return detail::grow_tree(X, y, weights, tree_config, num_classes, &columns, &rng);
}

}  // namespace

ForestModel fit_forest(const FeatureMatrix& X, std::span<const int> y, const ForestConfig& config,
                       std::size_t num_classes) {
  detail::check_training_set(X, y, num_classes, "fit_forest");
  if (X.size() == 0) throw ValidationError("fit_forest: empty training set");
  if (config.n_trees < 1) throw ValidationError("fit_forest: n_trees must be >= 1");
  if (config.max_depth < 0) throw ValidationError("fit_forest: max_depth must be >= 0");

  const detail::ColumnIndex columns(X);
  ForestModel model;
  model.config = config;
  model.feature_dim = X.dim;
  model.classes = num_classes;
  model.trees.resize(static_cast<std::size_t>(config.n_trees));

  const int workers =
      std::max(1, std::min<int>(config.n_trees, static_cast<int>(std::thread::hardware_concurrency())));
  std::vector<std::future<void>> jobs;
  for (int w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int t = w; t < config.n_trees; t += workers) {
        model.trees[static_cast<std::size_t>(t)] = fit_one(X, y, config, num_classes, columns, t);
      }
    }));
  }
  for (auto& job : jobs) job.get();
  return model;
}

ProbaMatrix predict_proba(const ForestModel& m, const FeatureMatrix& X) {
  check_dimension(X, m.dim());
  ProbaMatrix out(X.size(), std::vector<double>(m.classes, 0.0));
  for (const auto& tree : m.trees) {
    const auto votes = predict(tree, X);
    for (std::size_t i = 0; i < X.size(); ++i) out[i][static_cast<std::size_t>(votes[i])] += 1.0;
  }
  const double n = static_cast<double>(m.trees.size());
  for (auto& row : out) {
    for (double& v : row) v /= n;
  }
  return out;
}

}  // namespace hopebench::classifiers
