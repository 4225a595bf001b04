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
#include "hopebench/numeric.hpp"

namespace hopebench::classifiers {

namespace {

double dot(const std::vector<double>& w, const SparseVector& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += w[x.indices[k]] * x.values[k];
  return s;
}

double data_loss(std::span<const double> margins, std::span<const int> y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    loss += y[i] == 1 ? softplus(-margins[i]) : softplus(margins[i]);
  }
  return loss;
}

}  // namespace

double logreg_objective(const LinearModel& m, const FeatureMatrix& X, std::span<const int> y) {
  std::vector<double> margins(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) margins[i] = dot(m.weights, X.rows[i]) + m.bias;
  double sq = 0.0;
  for (double w : m.weights) sq += w * w;
  return m.config.C * data_loss(margins, y) + 0.5 * sq;
}

LinearModel fit_logreg(const FeatureMatrix& X, std::span<const int> y, const LogRegConfig& config) {
  detail::check_training_set(X, y, 2, "fit_logreg");
  if (X.size() < 2) throw ValidationError("fit_logreg: need at least two examples");
  if (std::find(y.begin(), y.end(), 0) == y.end() || std::find(y.begin(), y.end(), 1) == y.end()) {
    throw ValidationError("fit_logreg: both classes must be present");
  }
  if (!(config.C > 0.0)) throw ValidationError("fit_logreg: C must be positive");

  const std::size_t n = X.size();
  const std::size_t dim = X.dim;
  LinearModel m;
  m.config = config;
  m.weights.assign(dim, 0.0);

  std::vector<double> margins(n, 0.0);
  std::vector<double> grad(dim, 0.0);
  std::vector<double> direction_margin(n, 0.0);
  double w_sq = 0.0;
  double objective = config.C * data_loss(margins, y);
  m.objective_trace.push_back(objective);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double residual = config.C * (stable_sigmoid(margins[i]) - y[i]);
      grad_bias += residual;
      const auto& x = X.rows[i];
      for (std::size_t k = 0; k < x.size(); ++k) grad[x.indices[k]] += residual * x.values[k];
    }
    double g_sq = grad_bias * grad_bias;
    double w_dot_g = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      grad[j] += m.weights[j];
      g_sq += grad[j] * grad[j];
      w_dot_g += m.weights[j] * grad[j];
    }
    m.gradient_norm = std::sqrt(g_sq);
    if (m.gradient_norm <= config.tolerance) break;

    double wgrad_sq = g_sq - grad_bias * grad_bias;
    for (std::size_t i = 0; i < n; ++i) direction_margin[i] = dot(grad, X.rows[i]) + grad_bias;

    // Backtracking along -grad; margins and |w|^2 update in closed form.
    step = std::min(1.0, step * 2.0);
    std::vector<double> trial(n);
    double trial_objective = 0.0;
    bool accepted = false;
    while (step > 1e-20) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = margins[i] - step * direction_margin[i];
      const double trial_w_sq = w_sq - 2.0 * step * w_dot_g + step * step * wgrad_sq;
      trial_objective = config.C * data_loss(trial, y) + 0.5 * trial_w_sq;
      if (trial_objective <= objective - kArmijo * step * g_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    for (std::size_t j = 0; j < dim; ++j) m.weights[j] -= step * grad[j];
    m.bias -= step * grad_bias;
    // Recompute exactly to keep the cached margins from drifting.
    w_sq = 0.0;
    for (double w : m.weights) w_sq += w * w;
    for (std::size_t i = 0; i < n; ++i) margins[i] = dot(m.weights, X.rows[i]) + m.bias;
    objective = config.C * data_loss(margins, y) + 0.5 * w_sq;
    m.objective_trace.push_back(objective);
    m.iterations = iter + 1;
  }
  return m;
}

ProbaMatrix predict_proba(const LinearModel& m, const FeatureMatrix& X) {
  check_dimension(X, m.dim());
  ProbaMatrix out(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double p = stable_sigmoid(dot(m.weights, X.rows[i]) + m.bias);
    out[i] = {1.0 - p, p};
  }
  return out;
}

}  // namespace hopebench::classifiers
