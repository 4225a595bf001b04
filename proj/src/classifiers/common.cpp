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
#include <limits>
#include <string>

#include "hopebench/classifiers.hpp"

namespace hopebench::classifiers {

int argmax(std::span<const double> row) {
  int best = 0;
  for (std::size_t c = 1; c < row.size(); ++c) {
    if (row[c] > row[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

std::vector<int> argmax_rows(const ProbaMatrix& proba) {
  std::vector<int> out;
  out.reserve(proba.size());
  for (const auto& row : proba) out.push_back(argmax(row));
  return out;
}

void check_dimension(const FeatureMatrix& X, std::size_t model_dim) {
  if (X.dim != model_dim) {
    throw DimensionMismatch("feature dimension " + std::to_string(X.dim) +
                            " does not match the model's " + std::to_string(model_dim));
  }
  for (const auto& row : X.rows) {
    if (row.indices.size() != row.values.size()) {
      throw ValidationError("sparse row has mismatched index and value lengths");
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row.indices[k] >= model_dim || (k > 0 && row.indices[k] <= row.indices[k - 1])) {
        throw DimensionMismatch("sparse row index " + std::to_string(row.indices[k]) +
                                " is out of order or outside dimension " +
                                std::to_string(model_dim));
      }
    }
  }
}

std::string_view model_kind(const AnyModel& m) {
  switch (m.index()) {
    case 0: return "logreg";
    case 1: return "naive_bayes";
    case 2: return "knn";
    case 3: return "tree";
    default: return "forest";
  }
}

ProbaMatrix predict_proba(const AnyModel& m, const FeatureMatrix& X) {
  return std::visit([&](const auto& model) { return predict_proba(model, X); }, m);
}

std::vector<int> predict(const AnyModel& m, const FeatureMatrix& X) {
  return argmax_rows(predict_proba(m, X));
}

namespace {

using nlohmann::json;

// JSON has no infinities; naive Bayes priors of absent classes are -inf.
json real_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double real_from(const json& j) {
  return j.is_null() ? -std::numeric_limits<double>::infinity() : j.get<double>();
}
json reals_json(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(real_json(x));
  return out;
}
std::vector<double> reals_from(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(real_from(x));
  return out;
}

json sparse_json(const SparseVector& x) { return {{"i", x.indices}, {"v", x.values}}; }
SparseVector sparse_from(const json& j) {
  SparseVector x;
  j.at("i").get_to(x.indices);
  j.at("v").get_to(x.values);
  return x;
}

json tree_json(const TreeModel& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    json node = {{"counts", n.class_counts}};
    if (!n.is_leaf()) {
      node["feature"] = n.feature;
      node["threshold"] = n.threshold;
      node["left"] = n.left;
      node["right"] = n.right;
    }
    nodes.push_back(std::move(node));
  }
  return {{"max_depth", t.config.max_depth},
          {"min_samples_split", t.config.min_samples_split},
          {"max_features", t.config.max_features},
          {"dim", t.feature_dim},
          {"classes", t.classes},
          {"nodes", std::move(nodes)}};
}

TreeModel tree_from(const json& j) {
  TreeModel t;
  t.config.max_depth = j.at("max_depth").get<int>();
  t.config.min_samples_split = j.at("min_samples_split").get<int>();
  t.config.max_features = j.at("max_features").get<std::size_t>();
  t.feature_dim = j.at("dim").get<std::size_t>();
  t.classes = j.at("classes").get<std::size_t>();
  for (const auto& node : j.at("nodes")) {
    TreeNode n;
    node.at("counts").get_to(n.class_counts);
    if (node.contains("feature")) {
      n.feature = node.at("feature").get<int>();
      n.threshold = node.at("threshold").get<double>();
      n.left = node.at("left").get<int>();
      n.right = node.at("right").get<int>();
    }
    t.nodes.push_back(std::move(n));
  }
  const int count = static_cast<int>(t.nodes.size());
  if (count == 0) throw ValidationError("tree has no nodes");
  for (const auto& n : t.nodes) {
    if (n.class_counts.size() != t.classes) throw ValidationError("tree node has wrong class count");
    if (!n.is_leaf() && (n.left <= 0 || n.left >= count || n.right <= 0 || n.right >= count ||
                         static_cast<std::size_t>(n.feature) >= t.feature_dim)) {
      throw ValidationError("tree node references are out of range");
    }
  }
  return t;
}

json body(const LinearModel& m) {
  return {{"weights", m.weights},
          {"bias", m.bias},
          {"C", m.config.C},
          {"tolerance", m.config.tolerance},
          {"max_iterations", m.config.max_iterations},
          {"iterations", m.iterations},
          {"gradient_norm", m.gradient_norm}};
}
json body(const NBModel& m) {
  json rows = json::array();
  for (const auto& row : m.feature_log_prob) rows.push_back(reals_json(row));
  return {{"alpha", m.alpha}, {"class_log_prior", reals_json(m.class_log_prior)},
          {"feature_log_prob", std::move(rows)}};
}
json body(const KnnModel& m) {
  json stored = json::array();
  for (const auto& x : m.stored) stored.push_back(sparse_json(x));
  return {{"k", m.k},         {"p", m.p},           {"dim", m.feature_dim},
          {"classes", m.classes}, {"labels", m.labels}, {"stored", std::move(stored)}};
}
json body(const TreeModel& m) { return tree_json(m); }
json body(const ForestModel& m) {
  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(tree_json(t));
  return {{"n_trees", m.config.n_trees},
          {"max_depth", m.config.max_depth},
          {"min_samples_split", m.config.min_samples_split},
          {"max_features", m.config.max_features == MaxFeatures::Sqrt ? "sqrt" : "all"},
          {"bootstrap", m.config.bootstrap},
          {"seed", m.config.seed},
          {"dim", m.feature_dim},
          {"classes", m.classes},
          {"trees", std::move(trees)}};
}

}  // namespace

nlohmann::json to_json(const AnyModel& m) {
  json j = std::visit([](const auto& model) { return body(model); }, m);
  j["model_kind"] = std::string(model_kind(m));
  j["version"] = kModelFormatVersion;
  return j;
}

AnyModel from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw ValidationError("unsupported model format version " + j.at("version").dump());
    }
    const auto kind = j.at("model_kind").get<std::string>();
    if (kind == "logreg") {
      LinearModel m;
      j.at("weights").get_to(m.weights);
      m.bias = j.at("bias").get<double>();
      m.config.C = j.at("C").get<double>();
      m.config.tolerance = j.at("tolerance").get<double>();
      m.config.max_iterations = j.at("max_iterations").get<int>();
      m.iterations = j.at("iterations").get<int>();
      m.gradient_norm = j.at("gradient_norm").get<double>();
      return m;
    }
    if (kind == "naive_bayes") {
      NBModel m;
      m.alpha = j.at("alpha").get<double>();
      m.class_log_prior = reals_from(j.at("class_log_prior"));
      for (const auto& row : j.at("feature_log_prob")) m.feature_log_prob.push_back(reals_from(row));
      if (m.feature_log_prob.size() != m.class_log_prior.size()) {
        throw ValidationError("naive Bayes class counts disagree");
      }
      return m;
    }
    if (kind == "knn") {
      KnnModel m;
      m.k = j.at("k").get<int>();
      m.p = j.at("p").get<double>();
      m.feature_dim = j.at("dim").get<std::size_t>();
      m.classes = j.at("classes").get<std::size_t>();
      j.at("labels").get_to(m.labels);
      for (const auto& x : j.at("stored")) m.stored.push_back(sparse_from(x));
      if (m.labels.size() != m.stored.size() || m.k < 1 ||
          static_cast<std::size_t>(m.k) > m.stored.size()) {
        throw ValidationError("inconsistent knn model");
      }
      return m;
    }
    if (kind == "tree") return tree_from(j);
    if (kind == "forest") {
      ForestModel m;
      m.config.n_trees = j.at("n_trees").get<int>();
      m.config.max_depth = j.at("max_depth").get<int>();
      m.config.min_samples_split = j.at("min_samples_split").get<int>();
      m.config.max_features =
          j.at("max_features").get<std::string>() == "all" ? MaxFeatures::All : MaxFeatures::Sqrt;
      m.config.bootstrap = j.at("bootstrap").get<bool>();
      m.config.seed = j.at("seed").get<std::uint64_t>();
      m.feature_dim = j.at("dim").get<std::size_t>();
      m.classes = j.at("classes").get<std::size_t>();
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from(t));
      if (m.trees.empty()) throw ValidationError("forest has no trees");
      return m;
    }
    throw ValidationError("unknown model_kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace hopebench::classifiers
