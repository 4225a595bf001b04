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

#pragma once

// Tree growing shared by fit_tree and fit_forest.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hopebench/classifiers.hpp"
#include "hopebench/random.hpp"

namespace hopebench::classifiers::detail {

/// Column-major copy of a feature matrix: per feature, (row, value) pairs in
/// increasing row order.
struct ColumnIndex {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> columns;

  explicit ColumnIndex(const FeatureMatrix& X);
};

/// Grows one tree. `weights[i]` is the multiplicity of row i (bootstrap);
/// rows with weight 0 are out of the bag. With config.max_features > 0 the
/// feature subsample per node is drawn from `rng` and `columns` must be set.
TreeModel grow_tree(const FeatureMatrix& X, std::span<const int> y,
                    std::span<const double> weights, const TreeConfig& config,
                    std::size_t num_classes, const ColumnIndex* columns, Rng* rng);

}  // namespace hopebench::classifiers::detail
