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

// Confusion matrices, per-class precision / recall / F1 and their macro,
// weighted and micro averages, plus the evaluation report and its table.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hopebench/error.hpp"

namespace hopebench::metrics {

/// counts[i][j]: examples of true class i predicted as class j.
struct ConfusionMatrix {
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::string> class_names;

  std::size_t num_classes() const { return counts.size(); }
  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t support(std::size_t c) const;    // row sum
  std::uint64_t predicted(std::size_t c) const;  // column sum

  /// Validates a square matrix whose size matches class_names.
  static ConfusionMatrix from_counts(std::vector<std::vector<std::uint64_t>> counts,
                                     std::vector<std::string> class_names);
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          std::vector<std::string> class_names);

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Set when some ratio had a zero denominator and was reported as 0.
  bool degenerate = false;
};

Scores prf(const ConfusionMatrix& m, std::size_t c);
/// Throws EmptyResultError when the matrix holds no examples.
double accuracy(const ConfusionMatrix& m);

enum class Average { Macro, Weighted, Micro };
Scores averages(const ConfusionMatrix& m, Average mode);

class EmptyResultError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ClassScores {
  std::string name;
  Scores scores;
  std::uint64_t support = 0;
};

struct EvalReport {
  std::string model;
  std::vector<std::uint64_t> seeds;
  std::vector<ClassScores> per_class;
  double accuracy = 0.0;
  Scores macro;
  Scores weighted;
  /// Summed over seeds for a multi-seed report.
  ConfusionMatrix confusion;
  std::optional<std::string> timestamp;

  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
};

EvalReport evaluate(std::string model, std::uint64_t seed, const ConfusionMatrix& m);

/// Arithmetic mean of every metric over runs of one model on one test set.
/// Throws ValidationError when the runs disagree on model or classes.
EvalReport mean_report(std::span<const EvalReport> runs);

/// Aligned text table: per-class P/R/F1, accuracy and weighted P/R/F1,
/// rounded to 3 decimals. Degenerate classes are marked with '*'.
std::string render_table(std::span<const EvalReport> reports);

}  // namespace hopebench::metrics
