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

// Tokenization and TF-IDF weighted n-gram features.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "hopebench/error.hpp"

namespace hopebench::features {

/// Sorted (index, weight) pairs. Indices strictly increase; no stored zeros.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  double norm() const;
  bool operator==(const SparseVector&) const = default;
};

struct FeatureMatrix {
  std::vector<SparseVector> rows;
  std::size_t dim = 0;

  std::size_t size() const { return rows.size(); }
};

enum class Analyzer { Word, Char };

std::string_view analyzer_name(Analyzer a);
Analyzer parse_analyzer(std::string_view name);

struct NgramRange {
  int min = 1;
  int max = 5;
  bool operator==(const NgramRange&) const = default;
};

class EmptyVocabularyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Lowercases Latin letters, splits on whitespace and strips leading and
/// trailing characters that are neither letters, marks nor digits.
std::vector<std::string> tokenize(std::string_view text);

/// Contiguous word n-grams for n in [n_min, n_max], joined by one space,
/// ordered by n and then by position.
std::vector<std::string> ngrams(std::span<const std::string> tokens, int n_min, int n_max);

/// Code-point n-grams over the tokens joined by single spaces.
std::vector<std::string> char_ngrams(std::span<const std::string> tokens, int n_min, int n_max);

class TfidfModel {
 public:
  static constexpr int kFormatVersion = 1;

  TfidfModel() = default;

  std::size_t dimension() const { return terms_.size(); }
  std::size_t num_docs() const { return num_docs_; }
  NgramRange ngram_range() const { return range_; }
  std::size_t min_df() const { return min_df_; }
  Analyzer analyzer() const { return analyzer_; }

  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
  /// Feature index of a term, or -1 when out of vocabulary.
  std::int64_t index_of(std::string_view term) const;
  /// ln((1 + N) / (1 + df)) + 1.
  double idf(std::size_t feature) const { return idf_[feature]; }

  /// Grams of a token list under this model's analyzer and n-gram range.
  std::vector<std::string> grams(std::span<const std::string> tokens) const;

  nlohmann::json to_json() const;
  static TfidfModel from_json(const nlohmann::json& j);

 private:
  friend TfidfModel fit_tfidf(std::span<const std::vector<std::string>>, NgramRange,
                              std::size_t, Analyzer);
  void rebuild_index();

  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t num_docs_ = 0;
  NgramRange range_;
  std::size_t min_df_ = 1;
  Analyzer analyzer_ = Analyzer::Word;
};

/// Vocabulary is every gram with document frequency >= min_df, indexed in
/// byte-wise sorted order. Throws EmptyVocabularyError when nothing survives.
TfidfModel fit_tfidf(std::span<const std::vector<std::string>> docs, NgramRange range,
                     std::size_t min_df = 1, Analyzer analyzer = Analyzer::Word);

/// Raw counts times idf, then L2-normalized. Out-of-vocabulary grams are
/// ignored; a document with no known grams maps to the empty vector.
SparseVector transform(const TfidfModel& model, std::span<const std::string> tokens);

FeatureMatrix transform_all(const TfidfModel& model,
                            std::span<const std::vector<std::string>> docs);

}  // namespace hopebench::features
