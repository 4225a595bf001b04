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

// Krippendorff's alpha with the nominal difference function over annotation
// tables that may be incomplete (not every annotator labels every unit).

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hopebench/corpus.hpp"
#include "hopebench/error.hpp"

namespace hopebench::agreement {

using corpus::Label;

struct AnnotationRecord {
  std::string unit_id;
  std::string annotator_id;
  Label label = Label::NotHope;
};

/// Symmetric label-by-label coincidence counts; n is the number of pairable
/// values (values in units with at least two annotations).
struct CoincidenceMatrix {
  static constexpr std::size_t kLabels = corpus::kAllLabels.size();

  std::array<std::array<double, kLabels>, kLabels> counts{};
  double n = 0.0;

  double at(Label c, Label k) const {
    return counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
  }
  /// n_c, the row marginal.
  double marginal(Label c) const;
  nlohmann::json to_json() const;
};

class UndefinedAlphaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Each unit with m >= 2 values adds 1/(m-1) to counts[v][v'] for every
/// ordered pair of its values taken from different annotators. Throws
/// ValidationError if an annotator labels the same unit twice.
CoincidenceMatrix coincidence_matrix(std::span<const AnnotationRecord> records);

struct AlphaResult {
  double alpha = 0.0;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  CoincidenceMatrix matrix;
};

/// alpha = 1 - D_o / D_e. Throws UndefinedAlphaError when there are no
/// pairable values or D_e is zero (a single value used throughout).
AlphaResult alpha_details(std::span<const AnnotationRecord> records);
double krippendorff_alpha(std::span<const AnnotationRecord> records);

struct AnnotatorInfo {
  std::string annotator_id;
  std::string gender;
  std::string higher_education;
  std::string schooling_medium;
};

struct AnnotatorSummary {
  /// (annotator, number of annotations), sorted by annotator id.
  std::vector<std::pair<std::string, std::size_t>> counts;
  std::vector<AnnotatorInfo> roster;
  /// Annotators seen in the records but missing from the roster.
  std::vector<std::string> warnings;

  /// Demographic totals grouped like a gender / education / schooling table.
  nlohmann::json demographics() const;
  nlohmann::json to_json() const;
};

AnnotatorSummary annotator_summary(std::span<const AnnotationRecord> records,
                                   std::span<const AnnotatorInfo> roster);

/// CSV with header unit_id,annotator_id,label.
std::vector<AnnotationRecord> parse_annotations(
    std::string_view content, const corpus::LabelMap& labels = corpus::LabelMap::defaults());
std::vector<AnnotationRecord> load_annotations(
    const std::filesystem::path& path,
    const corpus::LabelMap& labels = corpus::LabelMap::defaults());

/// CSV with header annotator_id,gender,higher_education,medium_of_schooling.
std::vector<AnnotatorInfo> parse_roster(std::string_view content);
std::vector<AnnotatorInfo> load_roster(const std::filesystem::path& path);

}  // namespace hopebench::agreement
