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
#include <cmath>
#include <numeric>

#include "classifiers/check.hpp"

namespace hopebench::classifiers {

KnnModel fit_knn(const FeatureMatrix& X, std::span<const int> y, int k, double p,
                 std::size_t num_classes) {
  detail::check_training_set(X, y, num_classes, "fit_knn");
  if (k < 1) throw ValidationError("fit_knn: k must be at least 1");
  if (static_cast<std::size_t>(k) > X.size()) {
    throw ValidationError("fit_knn: k=" + std::to_string(k) + " exceeds the " +
                          std::to_string(X.size()) + " stored examples");
  }
  if (!(p >= 1.0)) throw ValidationError("fit_knn: Minkowski power must be >= 1");
  KnnModel m;
  m.stored = X.rows;
  m.labels.assign(y.begin(), y.end());
  m.k = k;
  m.p = p;
  m.feature_dim = X.dim;
  m.classes = num_classes;
  return m;
}

double minkowski(const SparseVector& a, const SparseVector& b, double p) {
  double sum = 0.0;
  auto add = [&](double diff) {
    const double d = std::abs(diff);
    sum += p == 2.0 ? d * d : (p == 1.0 ? d : std::pow(d, p));
  };
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a.indices[i] < b.indices[j])) {
      add(a.values[i++]);
    } else if (i == a.size() || b.indices[j] < a.indices[i]) {
      add(b.values[j++]);
    } else {
      add(a.values[i++] - b.values[j++]);
    }
  }
  if (p == 1.0) return sum;
  if (p == 2.0) return std::sqrt(sum);
  return std::pow(sum, 1.0 / p);
}

ProbaMatrix predict_proba(const KnnModel& m, const FeatureMatrix& X) {
  check_dimension(X, m.dim());
  const std::size_t n = m.stored.size();
  const auto k = static_cast<std::size_t>(m.k);
  ProbaMatrix out(X.size(), std::vector<double>(m.classes, 0.0));
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t q = 0; q < X.size(); ++q) {
    for (std::size_t s = 0; s < n; ++s) dist[s] = {minkowski(X.rows[q], m.stored[s], m.p), s};
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    for (std::size_t r = 0; r < k; ++r) out[q][m.labels[dist[r].second]] += 1.0;
    for (double& v : out[q]) v /= static_cast<double>(k);
  }
  return out;
}

}  // namespace hopebench::classifiers
