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

#include "hopebench/dualchannel.hpp"
#include "hopebench/features.hpp"
#include "hopebench/numeric.hpp"
#include "hopebench/random.hpp"

namespace hopebench::dualchannel {

DivergenceError::DivergenceError(int epoch_, std::size_t step_, const std::string& what)
    : RuntimeFailure("training diverged at epoch " + std::to_string(epoch_) + ", step " +
                     std::to_string(step_) + ": " + what),
      epoch(epoch_),
      step(step_) {}

double sigmoid(double x) { return stable_sigmoid(x); }

double bce_loss(double p, int y) {
  constexpr double kClamp = 1e-7;
  p = std::clamp(p, kClamp, 1.0 - kClamp);
  return y == 1 ? -std::log(p) : -std::log1p(-p);
}

double mean_bce(std::span<const double> p, std::span<const int> y) {
  if (p.size() != y.size() || p.empty()) {
    throw ValidationError("mean_bce needs equally sized, nonempty inputs");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += bce_loss(p[i], y[i]);
  return sum / static_cast<double>(p.size());
}

void TokenizerHash::validate() const {
  if (vocab_size == 0 || (vocab_size & (vocab_size - 1)) != 0) {
    throw ValidationError("vocabulary size must be a power of two, got " +
                          std::to_string(vocab_size));
  }
  if (max_length == 0) throw ValidationError("max_length must be positive");
}

std::uint32_t TokenizerHash::id(std::string_view token) const {
  return static_cast<std::uint32_t>(fnv1a64(token) & (vocab_size - 1));
}

std::vector<std::uint32_t> TokenizerHash::encode(std::string_view text) const {
  std::vector<std::uint32_t> ids;
  for (const auto& token : features::tokenize(text)) {
    if (ids.size() == max_length) break;
    ids.push_back(id(token));
  }
  return ids;
}

namespace {

// Sorting first makes the pooled sum independent of token order.
VectorXd mean_embedding(const ChannelEncoder& enc, std::span<const std::uint32_t> ids) {
  VectorXd sum = VectorXd::Zero(static_cast<Eigen::Index>(enc.dim()));
  if (ids.empty()) return sum;
  std::vector<std::uint32_t> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  for (auto id : sorted) {
    if (id >= enc.vocab()) {
      throw ValidationError("token id " + std::to_string(id) + " outside vocabulary of " +
                            std::to_string(enc.vocab()));
    }
    sum += enc.embedding.row(id).transpose();
  }
  return sum / static_cast<double>(ids.size());
}

}  // namespace

VectorXd encode(const ChannelEncoder& enc, std::span<const std::uint32_t> ids) {
  return (enc.projection * mean_embedding(enc, ids) + enc.bias).array().tanh().matrix();
}

DualChannelModel DualChannelModel::zeros(const ModelConfig& config) {
  if (config.channels < 1 || config.channels > 2) {
    throw ValidationError("a model has one or two channels");
  }
  if (config.dim == 0 || config.vocab_size == 0) {
    throw ValidationError("model dimension and vocabulary must be positive");
  }
  const auto d = static_cast<Eigen::Index>(config.dim);
  const auto v = static_cast<Eigen::Index>(config.vocab_size);
  DualChannelModel m;
  m.config = config;
  for (std::size_t c = 0; c < config.channels; ++c) {
    m.encoders.push_back({RowMatrix::Zero(v, d), MatrixXd::Zero(d, d), VectorXd::Zero(d)});
    m.fusion.push_back(VectorXd::Zero(config.fusion == Fusion::Scalar ? 1 : d));
  }
  m.hidden_weight = MatrixXd::Zero(d, d);
  m.hidden_bias = VectorXd::Zero(d);
  m.out_weight = VectorXd::Zero(d);
  m.out_bias = 0.0;
  return m;
}

std::vector<DualChannelModel::Group> DualChannelModel::groups() {
  std::vector<Group> out;
  auto add = [&out](std::string name, auto& tensor) {
    out.push_back({std::move(name), std::span<double>(tensor.data(), tensor.size())});
  };
  for (std::size_t c = 0; c < encoders.size(); ++c) {
    const std::string prefix = "channel" + std::to_string(c) + "/";
    add(prefix + "embedding", encoders[c].embedding);
    add(prefix + "projection", encoders[c].projection);
    add(prefix + "bias", encoders[c].bias);
    add(prefix + "fusion", fusion[c]);
  }
  add("hidden/weight", hidden_weight);
  add("hidden/bias", hidden_bias);
  add("out/weight", out_weight);
  out.push_back({"out/bias", std::span<double>(&out_bias, 1)});
  return out;
}

bool DualChannelModel::all_finite() const {
  for (const auto& g : const_cast<DualChannelModel*>(this)->groups()) {
    for (double v : g.values) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

bool DualChannelModel::operator==(const DualChannelModel& other) const {
  if (config.vocab_size != other.config.vocab_size || config.dim != other.config.dim ||
      config.channels != other.config.channels || config.fusion != other.config.fusion) {
    return false;
  }
  auto a = const_cast<DualChannelModel*>(this)->groups();
  auto b = const_cast<DualChannelModel&>(other).groups();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::equal(a[i].values.begin(), a[i].values.end(), b[i].values.begin(),
                    b[i].values.end())) {
      return false;
    }
  }
  return true;
}

namespace {

template <typename Tensor>
void fill_normal(Tensor& t, std::uint64_t seed, double scale) {
  Rng rng(seed);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = scale * rng.normal();
}

template <typename Tensor>
void fill_uniform(Tensor& t, std::uint64_t seed, double limit) {
  Rng rng(seed);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = limit * (2.0 * rng.uniform() - 1.0);
}

}  // namespace

DualChannelModel init_model(const ModelConfig& config, std::uint64_t seed) {
  DualChannelModel m = DualChannelModel::zeros(config);
  const double glorot = std::sqrt(3.0 / static_cast<double>(config.dim));
  for (std::size_t c = 0; c < m.encoders.size(); ++c) {
    const std::string prefix = "dualchannel/init/channel" + std::to_string(c) + "/";
    fill_normal(m.encoders[c].embedding, derive_seed(seed, prefix + "embedding"), 0.1);
    fill_uniform(m.encoders[c].projection, derive_seed(seed, prefix + "projection"), glorot);
    m.fusion[c].setConstant(0.5);
  }
  fill_uniform(m.hidden_weight, derive_seed(seed, "dualchannel/init/hidden"), glorot);
  return m;
}

DualChannelModel random_model(const ModelConfig& config, std::uint64_t seed) {
  DualChannelModel m = DualChannelModel::zeros(config);
  Rng rng(derive_seed(seed, "dualchannel/random"));
  for (auto& g : m.groups()) {
    for (double& v : g.values) v = rng.normal() * 0.5;
  }
  return m;
}

DualChannelModel single_channel(const DualChannelModel& m) {
  DualChannelModel s = m;
  s.config.channels = 1;
  s.encoders.resize(1);
  s.fusion.resize(1);
  return s;
}

namespace {

struct Trace {
  std::vector<VectorXd> mean;
  std::vector<VectorXd> pooled;
  VectorXd hidden_in;  // fused pooled outputs
  VectorXd pre;        // before ReLU
  VectorXd mask;       // dropout scale per unit
  VectorXd act;        // after ReLU and dropout
  double p = 0.0;
};

void check_example(const DualChannelModel& m, const Example& x) {
  if (x.channels.size() < m.encoders.size()) {
    throw ValidationError("example has " + std::to_string(x.channels.size()) +
                          " channels, model needs " + std::to_string(m.encoders.size()));
  }
}

void run(const DualChannelModel& m, const Example& x, const std::optional<Dropout>& dropout,
         Trace& t) {
  check_example(m, x);
  const std::size_t channels = m.encoders.size();
  t.mean.resize(channels);
  t.pooled.resize(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    const auto& enc = m.encoders[c];
    t.mean[c] = mean_embedding(enc, x.channels[c]);
    t.pooled[c] = (enc.projection * t.mean[c] + enc.bias).array().tanh().matrix();
    VectorXd weighted = m.fusion[c].size() == 1 ? VectorXd(m.fusion[c](0) * t.pooled[c])
                                                : VectorXd(m.fusion[c].cwiseProduct(t.pooled[c]));
    if (c == 0) {
      t.hidden_in = std::move(weighted);
    } else {
      t.hidden_in += weighted;
    }
  }
  t.pre = m.hidden_weight * t.hidden_in + m.hidden_bias;
  t.mask = VectorXd::Ones(t.pre.size());
  if (dropout && dropout->rate > 0.0) {
    Rng rng(dropout->seed);
    const double keep = 1.0 / (1.0 - dropout->rate);
    for (Eigen::Index i = 0; i < t.mask.size(); ++i) {
      t.mask(i) = rng.uniform() < dropout->rate ? 0.0 : keep;
    }
  }
  t.act = t.pre.cwiseMax(0.0).cwiseProduct(t.mask);
  t.p = sigmoid(m.out_weight.dot(t.act) + m.out_bias);
}

void accumulate(const DualChannelModel& m, const Example& x, const Trace& t, double g,
                DualChannelModel& grad) {
  grad.out_bias += g;
  grad.out_weight += g * t.act;
  const VectorXd d_pre =
      (g * m.out_weight).cwiseProduct(t.mask).cwiseProduct((t.pre.array() > 0.0).cast<double>().matrix());
  grad.hidden_weight += d_pre * t.hidden_in.transpose();
  grad.hidden_bias += d_pre;
  const VectorXd d_hidden_in = m.hidden_weight.transpose() * d_pre;
  for (std::size_t c = 0; c < m.encoders.size(); ++c) {
    const auto& enc = m.encoders[c];
    VectorXd d_pooled;
    if (m.fusion[c].size() == 1) {
      grad.fusion[c](0) += d_hidden_in.dot(t.pooled[c]);
      d_pooled = m.fusion[c](0) * d_hidden_in;
    } else {
      grad.fusion[c] += d_hidden_in.cwiseProduct(t.pooled[c]);
      d_pooled = m.fusion[c].cwiseProduct(d_hidden_in);
    }
    const VectorXd d_z = d_pooled.cwiseProduct((1.0 - t.pooled[c].array().square()).matrix());
    grad.encoders[c].projection += d_z * t.mean[c].transpose();
    grad.encoders[c].bias += d_z;
    const auto& ids = x.channels[c];
    if (ids.empty()) continue;
    const VectorXd d_mean = (enc.projection.transpose() * d_z) / static_cast<double>(ids.size());
    for (auto id : ids) grad.encoders[c].embedding.row(id) += d_mean.transpose();
  }
}

std::uint64_t example_seed(std::uint64_t base, std::size_t index) {
  return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(index)));
}

}  // namespace

double forward(const DualChannelModel& m, const Example& x, const std::optional<Dropout>& dropout) {
  Trace t;
  run(m, x, dropout, t);
  if (!std::isfinite(t.p)) throw DivergenceError(0, 0, "non-finite forward output");
  return t.p;
}

namespace detail {

double loss_and_gradient(const DualChannelModel& m, std::span<const Example* const> batch,
                         DualChannelModel& grad, const std::optional<Dropout>& dropout) {
  if (batch.empty()) throw ValidationError("empty batch");
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  Trace t;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    std::optional<Dropout> d;
    if (dropout) d = Dropout{dropout->rate, example_seed(dropout->seed, i)};
    run(m, *batch[i], d, t);
    const int y = batch[i]->label;
    loss += bce_loss(t.p, y);
    // d(BCE)/d(logit) = p - y (ignoring the clamp, which only binds at |logit| > 16).
    accumulate(m, *batch[i], t, (t.p - static_cast<double>(y)) * scale, grad);
  }
  return loss * scale;
}

}  // namespace detail

namespace {

std::vector<const Example*> pointers(std::span<const Example> xs) {
  std::vector<const Example*> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(&x);
  return out;
}

}  // namespace

double loss_and_gradient(const DualChannelModel& m, std::span<const Example> batch,
                         DualChannelModel& grad, const std::optional<Dropout>& dropout) {
  const auto ptrs = pointers(batch);
  return detail::loss_and_gradient(m, ptrs, grad, dropout);
}

double batch_loss(const DualChannelModel& m, std::span<const Example> batch) {
  if (batch.empty()) throw ValidationError("empty batch");
  double loss = 0.0;
  Trace t;
  for (const auto& x : batch) {
    run(m, x, std::nullopt, t);
    loss += bce_loss(t.p, x.label);
  }
  return loss / static_cast<double>(batch.size());
}

// Central differences carry about 1e-11 of rounding noise at epsilon = 1e-5,
// so relative errors are taken against at least this magnitude.
constexpr double kGradFloor = 1e-6;

GradCheckResult grad_check(const DualChannelModel& m, std::span<const Example> batch,
                           double epsilon) {
  DualChannelModel grad = DualChannelModel::zeros(m.config);
  loss_and_gradient(m, batch, grad);
  DualChannelModel probe = m;
  auto analytic = grad.groups();
  auto params = probe.groups();
  const std::size_t dim = m.config.dim;

  GradCheckResult result;
  auto check = [&](std::size_t g, std::size_t i) {
    double& v = params[g].values[i];
    const double saved = v;
    v = saved + epsilon;
    const double up = batch_loss(probe, batch);
    v = saved - epsilon;
    const double down = batch_loss(probe, batch);
    v = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double a = analytic[g].values[i];
    const double scale = std::max({std::abs(a), std::abs(numeric), kGradFloor});
    const double rel = std::abs(a - numeric) / scale;
    ++result.checked;
    if (result.worst_group.empty() || rel > result.max_relative_error) {
      result.max_relative_error = rel;
      result.worst_group = params[g].name;
    }
  };

  for (std::size_t g = 0; g < params.size(); ++g) {
    const auto& name = params[g].name;
    if (name.size() > 9 && name.compare(name.size() - 9, 9, "embedding") == 0) {
      const std::size_t c = static_cast<std::size_t>(name[7] - '0');
      std::vector<std::uint32_t> rows;
      for (const auto& x : batch) rows.insert(rows.end(), x.channels[c].begin(), x.channels[c].end());
      std::sort(rows.begin(), rows.end());
      rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
      for (std::uint32_t r = 0; r < m.config.vocab_size; ++r) {
        if (!std::binary_search(rows.begin(), rows.end(), r)) {
          rows.push_back(r);  // one untouched row, gradient exactly zero
          break;
        }
      }
      for (auto r : rows) {
        for (std::size_t k = 0; k < dim; ++k) check(g, r * dim + k);
      }
    } else {
      for (std::size_t i = 0; i < params[g].values.size(); ++i) check(g, i);
    }
  }
  return result;
}

std::vector<double> predict_proba(const DualChannelModel& m, std::span<const Example> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(forward(m, x));
  return out;
}

std::vector<int> predict(const DualChannelModel& m, std::span<const Example> xs) {
  std::vector<int> out;
  out.reserve(xs.size());
  for (double p : predict_proba(m, xs)) out.push_back(p > 0.5 ? 1 : 0);
  return out;
}

}  // namespace hopebench::dualchannel
