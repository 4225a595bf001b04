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

#include "hopebench/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hopebench/text.hpp"

namespace hopebench::features {

double SparseVector::norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

std::string_view analyzer_name(Analyzer a) { return a == Analyzer::Word ? "word" : "char"; }

Analyzer parse_analyzer(std::string_view name) {
  if (name == "word") return Analyzer::Word;
  if (name == "char") return Analyzer::Char;
  throw ValidationError("unknown analyzer '" + std::string(name) + "' (expected word or char)");
}

std::vector<std::string> tokenize(std::string_view input) {
  std::vector<std::string> tokens;
  for (auto piece : text::split_whitespace(input)) {
    std::u32string cps = text::decode_utf8(piece);
    std::size_t begin = 0;
    std::size_t end = cps.size();
    while (begin < end && !text::is_word_char(cps[begin])) ++begin;
    while (end > begin && !text::is_word_char(cps[end - 1])) --end;
    if (begin == end) continue;
    std::string token;
    for (std::size_t i = begin; i < end; ++i) text::append_utf8(token, text::to_lower_latin(cps[i]));
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> ngrams(std::span<const std::string> tokens, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) {
    throw ValidationError("invalid n-gram range " + std::to_string(n_min) + ".." +
                          std::to_string(n_max));
  }
  std::vector<std::string> grams;
  const auto count = static_cast<int>(tokens.size());
  for (int n = n_min; n <= n_max && n <= count; ++n) {
    for (int start = 0; start + n <= count; ++start) {
      std::string gram = tokens[start];
      for (int k = 1; k < n; ++k) {
        gram.push_back(' ');
        gram += tokens[start + k];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

std::vector<std::string> char_ngrams(std::span<const std::string> tokens, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) {
    throw ValidationError("invalid n-gram range " + std::to_string(n_min) + ".." +
                          std::to_string(n_max));
  }
  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) joined.push_back(' ');
    joined += tokens[i];
  }
  const std::u32string cps = text::decode_utf8(joined);
  const auto count = static_cast<int>(cps.size());
  std::vector<std::string> grams;
  for (int n = n_min; n <= n_max && n <= count; ++n) {
    for (int start = 0; start + n <= count; ++start) {
      grams.push_back(text::encode_utf8(std::u32string_view(cps).substr(start, n)));
    }
  }
  return grams;
}

std::int64_t TfidfModel::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::vector<std::string> TfidfModel::grams(std::span<const std::string> tokens) const {
  return analyzer_ == Analyzer::Word ? ngrams(tokens, range_.min, range_.max)
                                     : char_ngrams(tokens, range_.min, range_.max);
}

void TfidfModel::rebuild_index() {
  index_.clear();
  index_.reserve(terms_.size());
  idf_.resize(terms_.size());
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    index_.emplace(terms_[j], static_cast<std::uint32_t>(j));
    idf_[j] = std::log((1.0 + static_cast<double>(num_docs_)) /
                       (1.0 + static_cast<double>(doc_freq_[j]))) +
              1.0;
  }
}

nlohmann::json TfidfModel::to_json() const {
  return {
      {"version", kFormatVersion},
      {"analyzer", analyzer_name(analyzer_)},
      {"n_range", {range_.min, range_.max}},
      {"min_df", min_df_},
      {"num_docs", num_docs_},
      {"vocab", terms_},
      {"df", doc_freq_},
  };
}

TfidfModel TfidfModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kFormatVersion) {
      throw ValidationError("unsupported TF-IDF model version " + j.at("version").dump());
    }
    TfidfModel m;
    m.analyzer_ = parse_analyzer(j.value("analyzer", std::string("word")));
    m.range_ = {j.at("n_range").at(0).get<int>(), j.at("n_range").at(1).get<int>()};
    m.min_df_ = j.at("min_df").get<std::size_t>();
    m.num_docs_ = j.at("num_docs").get<std::size_t>();
    m.terms_ = j.at("vocab").get<std::vector<std::string>>();
    m.doc_freq_ = j.at("df").get<std::vector<std::size_t>>();
    if (m.terms_.size() != m.doc_freq_.size()) {
      throw ValidationError("TF-IDF model vocab and df lengths differ");
    }
    for (std::size_t df : m.doc_freq_) {
      if (df < 1 || df > m.num_docs_) throw ValidationError("TF-IDF model has df out of range");
    }
    m.rebuild_index();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed TF-IDF model: ") + e.what());
  }
}

TfidfModel fit_tfidf(std::span<const std::vector<std::string>> docs, NgramRange range,
                     std::size_t min_df, Analyzer analyzer) {
  if (docs.empty()) throw ValidationError("cannot fit TF-IDF on an empty corpus");
  if (range.min < 1 || range.max < range.min) {
    throw ValidationError("invalid n-gram range " + std::to_string(range.min) + ".." +
                          std::to_string(range.max));
  }
  TfidfModel m;
  m.range_ = range;
  m.min_df_ = min_df;
  m.analyzer_ = analyzer;
  m.num_docs_ = docs.size();

  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    auto grams = m.grams(doc);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }
  for (auto& [term, count] : df) {
    if (count >= min_df) {
      m.terms_.push_back(term);
      m.doc_freq_.push_back(count);
    }
  }
  if (m.terms_.empty()) {
    throw EmptyVocabularyError("no n-gram reaches min_df=" + std::to_string(min_df));
  }
  m.rebuild_index();
  return m;
}

SparseVector transform(const TfidfModel& model, std::span<const std::string> tokens) {
  std::map<std::uint32_t, double> counts;
  for (const auto& g : model.grams(tokens)) {
    const auto j = model.index_of(g);
    if (j >= 0) counts[static_cast<std::uint32_t>(j)] += 1.0;
  }
  SparseVector v;
  v.indices.reserve(counts.size());
  v.values.reserve(counts.size());
  double sum_sq = 0.0;
  for (auto [j, tf] : counts) {
    const double w = tf * model.idf(j);
    v.indices.push_back(j);
    v.values.push_back(w);
    sum_sq += w * w;
  }
  if (sum_sq > 0.0) {
    const double norm = std::sqrt(sum_sq);
    for (double& w : v.values) w /= norm;
  }
  return v;
}

FeatureMatrix transform_all(const TfidfModel& model,
                            std::span<const std::vector<std::string>> docs) {
  FeatureMatrix X;
  X.dim = model.dimension();
  X.rows.reserve(docs.size());
  for (const auto& doc : docs) X.rows.push_back(transform(model, doc));
  return X;
}

}  // namespace hopebench::features
