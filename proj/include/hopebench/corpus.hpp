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

// Labeled comment datasets: CSV ingestion, label filtering, seeded
// (optionally stratified) train/dev/test splitting and corpus statistics.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hopebench/error.hpp"

namespace hopebench::corpus {

enum class Label { Hope, NotHope, NotKannada };

inline constexpr std::array<Label, 3> kAllLabels = {Label::Hope, Label::NotHope,
                                                   Label::NotKannada};

/// Canonical spellings used when writing files: Hope, Not-Hope, Not-Kannada.
std::string_view label_name(Label label);

/// Class index used by the classifiers: Not-Hope = 0, Hope = 1.
int class_index(Label label);
Label label_from_class(int index);
inline const std::vector<std::string> kClassNames = {"Not-Hope", "Hope"};

/// Maps label strings found in files onto labels.
class LabelMap {
 public:
  /// Hope, Not-Hope, Not-Kannada.
  static LabelMap defaults();
  /// "text=Variant,..." where Variant is Hope, NotHope or NotKannada.
  static LabelMap parse(std::string_view spec);

  void add(std::string spelling, Label label) { map_[std::move(spelling)] = label; }
  /// Adds every spelling of `other`, replacing existing ones.
  void merge(const LabelMap& other) {
    for (const auto& [spelling, label] : other.map_) map_[spelling] = label;
  }
  std::optional<Label> lookup(std::string_view spelling) const;

 private:
  std::map<std::string, Label, std::less<>> map_;
};

Label parse_label_variant(std::string_view variant);

struct Comment {
  std::int64_t id = 0;
  std::string text;
  Label label = Label::NotHope;
  std::optional<std::string> translation;

  bool operator==(const Comment&) const = default;
};

/// Immutable ordered collection of comments with unique ids.
class Dataset {
 public:
  Dataset() = default;
  /// Throws ValidationError on duplicate ids.
  Dataset(std::string name, std::vector<Comment> comments);

  const std::string& name() const { return name_; }
  const std::vector<Comment>& comments() const { return comments_; }
  std::size_t size() const { return comments_.size(); }
  bool empty() const { return comments_.empty(); }
  std::size_t count(Label label) const;
  const Comment& operator[](std::size_t i) const { return comments_[i]; }
  auto begin() const { return comments_.begin(); }
  auto end() const { return comments_.end(); }

  bool operator==(const Dataset& other) const { return comments_ == other.comments_; }

 private:
  std::string name_;
  std::vector<Comment> comments_;
};

class DataError : public ValidationError {
 public:
  DataError(std::size_t row, const std::string& what)
      : ValidationError("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class EmptyResultError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Parses dataset CSV: header with `text` and `label` columns and optional
/// `translation` and `id` columns. Without an `id` column, ids are 0..n-1 in
/// file order. Row numbers in errors count the header as row 1.
Dataset parse_dataset(std::string_view content, std::string name,
                      const LabelMap& labels = LabelMap::defaults());
Dataset load_dataset(const std::filesystem::path& path,
                     const LabelMap& labels = LabelMap::defaults());

/// Writes id,text,label[,translation] so that parse_dataset round-trips.
std::string serialize_dataset(const Dataset& d);
void save_dataset(const Dataset& d, const std::filesystem::path& path);

/// Concatenates datasets and renumbers ids 0..n-1.
Dataset concatenate(std::span<const Dataset> parts, std::string name);

/// Comments whose label is in `keep`, order and ids preserved. Throws
/// EmptyResultError when nothing is left.
Dataset filter_labels(const Dataset& d, std::span<const Label> keep);

struct SplitSpec {
  double train_fraction = 0.8;
  double dev_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
  bool stratified = true;

  /// Throws ValidationError unless each fraction is in (0,1) and they sum to 1.
  void validate() const;
};

struct SplitResult {
  Dataset train;
  Dataset dev;
  Dataset test;
};

/// Part sizes for n items: dev and test are round(n * fraction), train takes
/// the rest. For n = 6176 at 0.8/0.1/0.1 this is 4940/618/618.
std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec);

/// Seeded split. Stratified splits apportion each part across classes by
/// largest remainder (train first, dev next, test takes what is left), so
/// every per-class count is within one item of its exact quota. Each part
/// keeps the input order. Throws EmptyResultError if a part would be empty.
SplitResult split(const Dataset& d, const SplitSpec& spec);

struct CorpusStats {
  std::size_t num_posts = 0;
  std::size_t num_tokens = 0;
  std::size_t vocab_size = 0;
  std::size_t num_sentences = 0;
  std::size_t tokens_per_post = 0;
  std::size_t sentences_per_post = 0;

  nlohmann::json to_json() const;
  bool operator==(const CorpusStats&) const = default;
};

/// Sentences are the non-empty pieces between . ! ? newline and the danda.
std::size_t count_sentences(std::string_view text);

CorpusStats corpus_stats(const Dataset& d);

}  // namespace hopebench::corpus
