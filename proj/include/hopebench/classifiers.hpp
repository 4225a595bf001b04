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

// Classical baselines over sparse TF-IDF rows: L2 logistic regression,
// multinomial naive Bayes, k-nearest neighbours, CART with Gini impurity and
// a bagged random forest. Every model is a plain value with fit / predict /
// predict_proba free functions and JSON persistence tagged by model_kind.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hopebench/error.hpp"
#include "hopebench/features.hpp"

namespace hopebench::classifiers {

using features::FeatureMatrix;
using features::SparseVector;

/// One row per example, one column per class; rows sum to 1.
using ProbaMatrix = std::vector<std::vector<double>>;

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Index of the largest entry; ties go to the lowest index.
int argmax(std::span<const double> row);
std::vector<int> argmax_rows(const ProbaMatrix& proba);

// --- logistic regression --------------------------------------------------

struct LogRegConfig {
  double C = 0.1;
  double tolerance = 1e-4;  // on the gradient norm
  int max_iterations = 10000;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  LogRegConfig config;
  int iterations = 0;
  double gradient_norm = 0.0;
  /// Objective after each accepted step (index 0 is the zero start).
  std::vector<double> objective_trace;

  std::size_t dim() const { return weights.size(); }
};

/// Minimizes C * sum(log-loss) + 0.5 * |w|^2 (bias not penalized) by full-batch
/// gradient descent with Armijo backtracking, starting from zero.
LinearModel fit_logreg(const FeatureMatrix& X, std::span<const int> y, const LogRegConfig& config);
double logreg_objective(const LinearModel& m, const FeatureMatrix& X, std::span<const int> y);
ProbaMatrix predict_proba(const LinearModel& m, const FeatureMatrix& X);

// --- multinomial naive Bayes ----------------------------------------------

struct NBModel {
  std::vector<double> class_log_prior;
  std::vector<std::vector<double>> feature_log_prob;  // [class][feature]
  double alpha = 1.0;

  std::size_t dim() const { return feature_log_prob.empty() ? 0 : feature_log_prob[0].size(); }
  std::size_t num_classes() const { return class_log_prior.size(); }
};

NBModel fit_nb(const FeatureMatrix& X, std::span<const int> y, double alpha = 1.0,
               std::size_t num_classes = 2);
ProbaMatrix predict_proba(const NBModel& m, const FeatureMatrix& X);

// --- k nearest neighbours -------------------------------------------------

struct KnnModel {
  std::vector<SparseVector> stored;
  std::vector<int> labels;
  int k = 3;
  double p = 2.0;
  std::size_t feature_dim = 0;
  std::size_t classes = 2;

  std::size_t dim() const { return feature_dim; }
  std::size_t num_classes() const { return classes; }
};

KnnModel fit_knn(const FeatureMatrix& X, std::span<const int> y, int k = 3, double p = 2.0,
                 std::size_t num_classes = 2);
/// Minkowski distance between sparse vectors.
double minkowski(const SparseVector& a, const SparseVector& b, double p);
/// Vote fractions of the k nearest (distance ties go to the lower stored index).
ProbaMatrix predict_proba(const KnnModel& m, const FeatureMatrix& X);

// --- decision tree ----------------------------------------------------------

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0.0;
  int left = -1;  // x[feature] <= threshold
  int right = -1;
  std::vector<double> class_counts;  // weighted training counts reaching the node

  bool is_leaf() const { return feature < 0; }
};

struct TreeConfig {
  int max_depth = 800;
  int min_samples_split = 5;
  /// Features examined per split; 0 means all of them.
  std::size_t max_features = 0;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  TreeConfig config;
  std::size_t feature_dim = 0;
  std::size_t classes = 2;

  std::size_t dim() const { return feature_dim; }
  std::size_t num_classes() const { return classes; }
  int depth() const;
  /// Index of the leaf reached by x.
  int leaf_of(const SparseVector& x) const;
};

/// CART on Gini impurity. Candidate thresholds are midpoints between
/// consecutive distinct values of a feature within the node (implicit zeros
/// included); ties prefer the lower feature index, then the lower threshold.
/// Stops at max_depth, below min_samples_split samples, or on a pure node.
TreeModel fit_tree(const FeatureMatrix& X, std::span<const int> y, const TreeConfig& config = {},
                   std::size_t num_classes = 2);
/// Leaf class frequencies.
ProbaMatrix predict_proba(const TreeModel& m, const FeatureMatrix& X);

// --- random forest ----------------------------------------------------------

enum class MaxFeatures { Sqrt, All };

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 800;
  int min_samples_split = 5;
  MaxFeatures max_features = MaxFeatures::Sqrt;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  ForestConfig config;
  std::size_t feature_dim = 0;
  std::size_t classes = 2;

  std::size_t dim() const { return feature_dim; }
  std::size_t num_classes() const { return classes; }
};

/// Tree t is grown from Rng(derive_seed(seed, "forest/tree/<t>")) so trees are
/// independent of fitting order.
ForestModel fit_forest(const FeatureMatrix& X, std::span<const int> y, const ForestConfig& config,
                       std::size_t num_classes = 2);
/// Fraction of trees voting for each class.
ProbaMatrix predict_proba(const ForestModel& m, const FeatureMatrix& X);

// --- common surface ---------------------------------------------------------

using AnyModel = std::variant<LinearModel, NBModel, KnnModel, TreeModel, ForestModel>;

std::string_view model_kind(const AnyModel& m);
ProbaMatrix predict_proba(const AnyModel& m, const FeatureMatrix& X);
std::vector<int> predict(const AnyModel& m, const FeatureMatrix& X);

template <typename Model>
std::vector<int> predict(const Model& m, const FeatureMatrix& X) {
  return argmax_rows(predict_proba(m, X));
}

inline constexpr int kModelFormatVersion = 1;
nlohmann::json to_json(const AnyModel& m);
AnyModel from_json(const nlohmann::json& j);

/// Throws DimensionMismatch when X was built for another feature space.
void check_dimension(const FeatureMatrix& X, std::size_t model_dim);

}  // namespace hopebench::classifiers
