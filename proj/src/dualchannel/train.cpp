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

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "hopebench/dualchannel.hpp"
#include "hopebench/metrics.hpp"
#include "hopebench/random.hpp"

namespace hopebench::dualchannel {

namespace detail {
double loss_and_gradient(const DualChannelModel& m, std::span<const Example* const> batch,
                         DualChannelModel& grad, const std::optional<Dropout>& dropout);
}

void adamw_step(std::span<const std::span<double>> params,
                std::span<const std::span<const double>> grads, AdamWState& state,
                const AdamWConfig& config) {
  if (params.size() != grads.size()) throw ValidationError("adamw: parameter/gradient count mismatch");
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.size(), 0.0);
      state.v.emplace_back(p.size(), 0.0);
    }
  }
  if (state.m.size() != params.size()) throw ValidationError("adamw: state does not match parameters");
  for (std::size_t g = 0; g < params.size(); ++g) {
    if (params[g].size() != grads[g].size() || state.m[g].size() != params[g].size()) {
      throw ValidationError("adamw: shape mismatch in group " + std::to_string(g));
    }
    for (double v : grads[g]) {
      if (!std::isfinite(v)) throw ValidationError("adamw: non-finite gradient");
    }
  }

  ++state.step;
  const auto t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(config.beta1, t);
  const double bc2 = 1.0 - std::pow(config.beta2, t);
  const double lr = config.learning_rate;
  for (std::size_t g = 0; g < params.size(); ++g) {
    auto& m = state.m[g];
    auto& v = state.v[g];
    const auto grad = grads[g];
    auto theta = params[g];
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grad[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      theta[i] -= lr * (m_hat / (std::sqrt(v_hat) + config.eps) + config.weight_decay * theta[i]);
    }
  }
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw ValidationError("batch size must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("dropout must be in [0, 1)");
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (epochs < 0) throw ValidationError("epochs must be >= 0");
  if (!(weight_decay >= 0.0)) throw ValidationError("weight decay must be >= 0");
}

namespace {

double weighted_f1(const DualChannelModel& m, std::span<const Example> xs) {
  std::vector<int> truth;
  for (const auto& x : xs) truth.push_back(x.label);
  const auto pred = predict(m, xs);
  const auto cm = metrics::confusion(truth, pred, {"Not-Hope", "Hope"});
  return metrics::averages(cm, metrics::Average::Weighted).f1;
}

void check_set(const DualChannelModel& m, std::span<const Example> xs, const char* which) {
  for (const auto& x : xs) {
    if (x.label != 0 && x.label != 1) {
      throw ValidationError(std::string(which) + " set has a non-binary label");
    }
    if (x.channels.size() < m.encoders.size()) {
      throw ValidationError(std::string(which) + " set is missing a channel");
    }
    for (std::size_t c = 0; c < m.encoders.size(); ++c) {
      for (auto id : x.channels[c]) {
        if (id >= m.config.vocab_size) {
          throw ValidationError(std::string(which) + " set has a token id outside the vocabulary");
        }
      }
    }
  }
}

}  // namespace

TrainResult train(DualChannelModel model, std::span<const Example> train_set,
                  std::span<const Example> dev_set, const TrainConfig& config) {
  config.validate();
  check_set(model, train_set, "training");
  check_set(model, dev_set, "dev");
  TrainResult result;
  result.model = model;
  if (config.epochs == 0) return result;
  if (train_set.empty()) throw ValidationError("empty training set");

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(derive_seed(config.seed, "dualchannel/shuffle"));
  const std::uint64_t dropout_base = derive_seed(config.seed, "dualchannel/dropout");
  const AdamWConfig adam{config.learning_rate, config.weight_decay};
  AdamWState state;
  DualChannelModel grad = DualChannelModel::zeros(model.config);

  auto model_groups = model.groups();
  auto grad_groups = grad.groups();
  std::vector<std::span<double>> params;
  std::vector<std::span<const double>> grads;
  for (std::size_t g = 0; g < model_groups.size(); ++g) {
    if (config.freeze_second_fusion && model_groups[g].name == "channel1/fusion") continue;
    params.push_back(model_groups[g].values);
    grads.push_back(grad_groups[g].values);
  }

  double best_f1 = -std::numeric_limits<double>::infinity();
  std::size_t step = 0;
  std::vector<const Example*> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span(order));
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      batch.clear();
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        batch.push_back(&train_set[order[i]]);
      }
      for (auto& g : grad_groups) std::fill(g.values.begin(), g.values.end(), 0.0);
      std::optional<Dropout> dropout;
      if (config.dropout > 0.0) {
        dropout = Dropout{config.dropout, splitmix64(dropout_base ^ splitmix64(step))};
      }
      const double loss = detail::loss_and_gradient(model, batch, grad, dropout);
      if (!std::isfinite(loss)) throw DivergenceError(epoch, step, "non-finite loss");
      total += loss * static_cast<double>(batch.size());
      try {
        adamw_step(params, grads, state, adam);
      } catch (const ValidationError& e) {
        throw DivergenceError(epoch, step, e.what());
      }
      if (!model.all_finite()) throw DivergenceError(epoch, step, "non-finite parameter");
      ++step;
    }

    EpochRecord record{epoch, total / static_cast<double>(train_set.size()), std::nullopt};
    if (!dev_set.empty()) {
      record.dev_weighted_f1 = weighted_f1(model, dev_set);
      if (*record.dev_weighted_f1 > best_f1) {
        best_f1 = *record.dev_weighted_f1;
        result.model = model;
        result.best_epoch = epoch;
      }
    } else {
      result.model = model;
      result.best_epoch = epoch;
    }
    result.history.push_back(record);
  }
  return result;
}

std::string history_csv(std::span<const EpochRecord> history) {
  std::string out = "epoch,train_loss,dev_weighted_f1\n";
  char buf[96];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,", r.epoch, r.train_loss);
    out += buf;
    if (r.dev_weighted_f1) {
      std::snprintf(buf, sizeof buf, "%.10g", *r.dev_weighted_f1);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

// --- persistence ------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'H', 'B', 'D', 'C'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value)) {
    throw ValidationError("truncated model file");
  }
  return value;
}

}  // namespace

void save_model(const DualChannelModel& m, const TokenizerHash& tokenizer,
                const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "model files are little-endian");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, m.config.vocab_size);
  put<std::uint64_t>(out, m.config.dim);
  put<std::uint64_t>(out, m.config.channels);
  put<std::uint32_t>(out, m.config.fusion == Fusion::Scalar ? 0 : 1);
  put<std::uint32_t>(out, tokenizer.vocab_size);
  put<std::uint64_t>(out, tokenizer.max_length);
  for (const auto& g : const_cast<DualChannelModel&>(m).groups()) {
    put<std::uint64_t>(out, g.values.size());
    out.write(reinterpret_cast<const char*>(g.values.data()),
              static_cast<std::streamsize>(g.values.size() * sizeof(double)));
  }
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot read " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw ValidationError(path.string() + " is not a dual-channel model file");
  }
  if (get<std::uint32_t>(in) != kVersion) throw ValidationError("unsupported model file version");
  ModelConfig config;
  config.vocab_size = get<std::uint64_t>(in);
  config.dim = get<std::uint64_t>(in);
  config.channels = get<std::uint64_t>(in);
  config.fusion = get<std::uint32_t>(in) == 0 ? Fusion::Scalar : Fusion::PerDimension;
  if (config.vocab_size > (1u << 24) || config.dim > 4096) {
    throw ValidationError("implausible model shape in " + path.string());
  }
  LoadedModel loaded{DualChannelModel::zeros(config), {}};
  loaded.tokenizer.vocab_size = get<std::uint32_t>(in);
  loaded.tokenizer.max_length = get<std::uint64_t>(in);
  loaded.tokenizer.validate();
  if (loaded.tokenizer.vocab_size != config.vocab_size) {
    throw ValidationError("tokenizer and model vocabulary sizes differ");
  }
  for (auto& g : loaded.model.groups()) {
    if (get<std::uint64_t>(in) != g.values.size()) {
      throw ValidationError("tensor " + g.name + " has the wrong size");
    }
    if (!in.read(reinterpret_cast<char*>(g.values.data()),
                 static_cast<std::streamsize>(g.values.size() * sizeof(double)))) {
      throw ValidationError("truncated model file");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ValidationError("trailing bytes in model file");
  return loaded;
}

}  // namespace hopebench::dualchannel
