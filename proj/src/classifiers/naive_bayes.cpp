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
#include <limits>

#include "classifiers/check.hpp"

namespace hopebench::classifiers {

NBModel fit_nb(const FeatureMatrix& X, std::span<const int> y, double alpha,
               std::size_t num_classes) {
  detail::check_training_set(X, y, num_classes, "fit_nb");
  if (!(alpha > 0.0)) throw ValidationError("fit_nb: alpha must be positive");
  if (X.size() == 0) throw ValidationError("fit_nb: empty training set");

  const std::size_t dim = X.dim;
  std::vector<std::vector<double>> counts(num_classes, std::vector<double>(dim, 0.0));
  std::vector<double> class_sizes(num_classes, 0.0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto& x = X.rows[i];
    class_sizes[y[i]] += 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x.values[k] < 0.0) throw ValidationError("fit_nb: negative feature value");
      counts[y[i]][x.indices[k]] += x.values[k];
    }
  }

  NBModel m;
  m.alpha = alpha;
  m.class_log_prior.resize(num_classes);
  m.feature_log_prob.resize(num_classes);
  const double total = static_cast<double>(X.size());
  for (std::size_t c = 0; c < num_classes; ++c) {
    m.class_log_prior[c] = class_sizes[c] > 0.0 ? std::log(class_sizes[c] / total)
                                                : -std::numeric_limits<double>::infinity();
    double row_total = 0.0;
    for (double v : counts[c]) row_total += v;
    const double denom = std::log(row_total + alpha * static_cast<double>(dim));
    auto& logp = m.feature_log_prob[c];
    logp.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) logp[j] = std::log(counts[c][j] + alpha) - denom;
  }
  return m;
}

ProbaMatrix predict_proba(const NBModel& m, const FeatureMatrix& X) {
  check_dimension(X, m.dim());
  const std::size_t classes = m.num_classes();
  ProbaMatrix out(X.size(), std::vector<double>(classes, 0.0));
  std::vector<double> joint(classes);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto& x = X.rows[i];
    for (std::size_t c = 0; c < classes; ++c) {
      double s = m.class_log_prior[c];
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x.values[k] < 0.0) throw ValidationError("naive Bayes: negative feature value");
        s += x.values[k] * m.feature_log_prob[c][x.indices[k]];
      }
      joint[c] = s;
    }
    const double top = *std::max_element(joint.begin(), joint.end());
    double z = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      out[i][c] = std::exp(joint[c] - top);
      z += out[i][c];
    }
    for (double& p : out[i]) p /= z;
  }
  return out;
}

}  // namespace hopebench::classifiers
