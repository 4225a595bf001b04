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

// Desk-scale dual-channel classifier: two bag-of-embeddings encoders (the
// code-mixed text and its English translation), a learnable weighted sum of
// their pooled outputs, a one-hidden-layer feed-forward head and a sigmoid.
// Trained with binary cross-entropy and AdamW; gradients are hand-derived and
// checked against central differences.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hopebench/error.hpp"

namespace hopebench::dualchannel {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

class DivergenceError : public RuntimeFailure {
 public:
  DivergenceError(int epoch, std::size_t step, const std::string& what);
  int epoch;
  std::size_t step;
};

double sigmoid(double x);
/// Binary cross-entropy with p clamped to [1e-7, 1 - 1e-7].
double bce_loss(double p, int y);
double mean_bce(std::span<const double> p, std::span<const int> y);

/// Token ids are the low bits of the 64-bit FNV-1a hash of each token
/// produced by features::tokenize.
struct TokenizerHash {
  std::uint32_t vocab_size = 1u << 15;  // power of two
  std::size_t max_length = 128;

  std::uint32_t id(std::string_view token) const;
  /// Tokenizes, hashes and truncates to max_length.
  std::vector<std::uint32_t> encode(std::string_view text) const;
  void validate() const;
};

struct ChannelEncoder {
  RowMatrix embedding;  // vocab x dim
  MatrixXd projection;  // dim x dim
  VectorXd bias;        // dim

  std::size_t vocab() const { return static_cast<std::size_t>(embedding.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(embedding.cols()); }
};

/// tanh(projection * mean(embedding rows of ids) + bias); the mean of an empty
/// list is the zero vector. Throws ValidationError on an out-of-range id.
VectorXd encode(const ChannelEncoder& enc, std::span<const std::uint32_t> ids);

enum class Fusion { Scalar, PerDimension };

struct ModelConfig {
  std::size_t vocab_size = 1u << 15;
  std::size_t dim = 64;
  std::size_t channels = 2;  // 1 gives the single-channel submodel
  Fusion fusion = Fusion::Scalar;
};

struct DualChannelModel {
  ModelConfig config;
  std::vector<ChannelEncoder> encoders;  // [0] code-mixed, [1] translated
  std::vector<VectorXd> fusion;          // per channel, size 1 or dim
  MatrixXd hidden_weight;                // dim x dim
  VectorXd hidden_bias;                  // dim
  VectorXd out_weight;                   // dim
  double out_bias = 0.0;

  /// Same shapes, every parameter zero.
  static DualChannelModel zeros(const ModelConfig& config);

  /// Parameter tensors flattened in a fixed order, paired with their names.
  struct Group {
    std::string name;
    std::span<double> values;
  };
  std::vector<Group> groups();
  bool all_finite() const;
  bool operator==(const DualChannelModel& other) const;
};

/// Random encoders and hidden layer, fusion weights 0.5 and a zero output
/// layer, so every prediction starts at exactly 0.5. Each tensor is drawn
/// from its own stream derived from (seed, tensor name), which makes the
/// first channel of a dual model identical to a single-channel model with
/// the same seed.
DualChannelModel init_model(const ModelConfig& config, std::uint64_t seed);
/// Every parameter random, for gradient checks.
DualChannelModel random_model(const ModelConfig& config, std::uint64_t seed);
/// The model restricted to its first channel.
DualChannelModel single_channel(const DualChannelModel& m);

struct Example {
  std::vector<std::vector<std::uint32_t>> channels;  // ids per channel
  int label = 0;
};

/// Inverted dropout on the hidden layer with a mask drawn from `seed`.
struct Dropout {
  double rate = 0.0;
  std::uint64_t seed = 0;
};

/// Probability of the positive class. Extra channels in the example beyond
/// the model's are ignored. Throws DivergenceError on a non-finite value.
double forward(const DualChannelModel& m, const Example& x,
               const std::optional<Dropout>& dropout = std::nullopt);

/// Mean BCE of a batch and its gradient, accumulated into `grad` (which must
/// have the model's shapes). Dropout masks use seed mix(base, index).
double loss_and_gradient(const DualChannelModel& m, std::span<const Example> batch,
                         DualChannelModel& grad,
                         const std::optional<Dropout>& dropout = std::nullopt);
double batch_loss(const DualChannelModel& m, std::span<const Example> batch);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_group;
  std::size_t checked = 0;
};

/// Compares the analytic gradient of the mean BCE with central differences
/// over every parameter except embedding rows the batch does not touch (of
/// those, one row per channel is sampled to confirm its zero gradient). The
/// relative error is |a - n| / max(|a|, |n|, 1e-6), which keeps rounding noise
/// on near-zero gradients from dominating while still catching any absolute
/// discrepancy above about 1e-10.
GradCheckResult grad_check(const DualChannelModel& m, std::span<const Example> batch,
                           double epsilon = 1e-5);

// --- optimizer ----------------------------------------------------------------

struct AdamWConfig {
  double learning_rate = 2e-3;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamWState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  long step = 0;
};

/// theta -= lr * m_hat / (sqrt(v_hat) + eps) + lr * wd * theta, per group.
/// Throws ValidationError on a non-finite gradient or mismatched shapes.
void adamw_step(std::span<const std::span<double>> params,
                std::span<const std::span<const double>> grads, AdamWState& state,
                const AdamWConfig& config);

// --- training -------------------------------------------------------------------

struct TrainConfig {
  std::size_t batch_size = 32;
  double dropout = 0.1;
  double learning_rate = 2e-3;
  int epochs = 10;
  double weight_decay = 0.01;
  std::uint64_t seed = 0;
  /// Keeps the second channel's fusion weight at its initial value.
  bool freeze_second_fusion = false;

  /// The fine-tuning rate of the original transformer setup.
  static constexpr double kFineTuneLearningRate = 2e-5;
  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  std::optional<double> dev_weighted_f1;
};

struct TrainResult {
  DualChannelModel model;
  std::vector<EpochRecord> history;
  int best_epoch = 0;  // 0 is the initialization
};

/// Shuffled minibatch AdamW. Keeps the parameters of the epoch with the best
/// dev weighted F1 (earliest on ties); without a dev set keeps the last epoch.
TrainResult train(DualChannelModel model, std::span<const Example> train_set,
                  std::span<const Example> dev_set, const TrainConfig& config);

std::vector<int> predict(const DualChannelModel& m, std::span<const Example> xs);
std::vector<double> predict_proba(const DualChannelModel& m, std::span<const Example> xs);

/// Writes `epoch,train_loss,dev_weighted_f1`.
std::string history_csv(std::span<const EpochRecord> history);

// --- persistence ------------------------------------------------------------------

/// Little-endian binary: "HBDC", version, shapes, tokenizer, then tensors in
/// group order.
void save_model(const DualChannelModel& m, const TokenizerHash& tokenizer,
                const std::filesystem::path& path);
struct LoadedModel {
  DualChannelModel model;
  TokenizerHash tokenizer;
};
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace hopebench::dualchannel
