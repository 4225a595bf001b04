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

#include "hopebench/agreement.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hopebench/csv.hpp"

namespace hopebench::agreement {

namespace {

std::size_t idx(Label l) { return static_cast<std::size_t>(l); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

double CoincidenceMatrix::marginal(Label c) const {
  double sum = 0.0;
  for (double v : counts[idx(c)]) sum += v;
  return sum;
}

nlohmann::json CoincidenceMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : counts) rows.push_back(row);
  nlohmann::json labels = nlohmann::json::array();
  for (Label l : corpus::kAllLabels) labels.push_back(corpus::label_name(l));
  return {{"labels", labels}, {"counts", rows}, {"n", n}};
}

CoincidenceMatrix coincidence_matrix(std::span<const AnnotationRecord> records) {
  std::map<std::string, std::vector<const AnnotationRecord*>> units;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : records) {
    if (!seen.emplace(r.unit_id, r.annotator_id).second) {
      throw ValidationError("annotator '" + r.annotator_id + "' labels unit '" + r.unit_id +
                            "' more than once");
    }
    units[r.unit_id].push_back(&r);
  }
  CoincidenceMatrix m;
  for (const auto& [unit, values] : units) {
    const std::size_t count = values.size();
    if (count < 2) continue;
    std::array<double, CoincidenceMatrix::kLabels> per_label{};
    for (const auto* r : values) per_label[idx(r->label)] += 1.0;
    const double weight = 1.0 / static_cast<double>(count - 1);
    // Ordered pairs of distinct positions: n_c * n_k pairs for c != k and
    // n_c * (n_c - 1) for c == k.
    for (std::size_t c = 0; c < per_label.size(); ++c) {
      for (std::size_t k = 0; k < per_label.size(); ++k) {
        const double pairs = c == k ? per_label[c] * (per_label[c] - 1.0) : per_label[c] * per_label[k];
        m.counts[c][k] += pairs * weight;
      }
    }
    m.n += static_cast<double>(count);
  }
  return m;
}

AlphaResult alpha_details(std::span<const AnnotationRecord> records) {
  AlphaResult r;
  r.matrix = coincidence_matrix(records);
  const auto& m = r.matrix;
  if (m.n < 2.0) throw UndefinedAlphaError("alpha is undefined: no unit has two annotations");

  double observed = 0.0;
  std::array<double, CoincidenceMatrix::kLabels> marg{};
  for (std::size_t c = 0; c < marg.size(); ++c) {
    for (std::size_t k = 0; k < marg.size(); ++k) {
      marg[c] += m.counts[c][k];
      if (c != k) observed += m.counts[c][k];
    }
  }
  double expected = 0.0;
  for (std::size_t c = 0; c < marg.size(); ++c) {
    for (std::size_t k = 0; k < marg.size(); ++k) {
      if (c != k) expected += marg[c] * marg[k];
    }
  }
  r.observed_disagreement = observed / m.n;
  r.expected_disagreement = expected / (m.n * (m.n - 1.0));
  if (r.expected_disagreement == 0.0) {
    throw UndefinedAlphaError("alpha is undefined: every pairable value carries the same label");
  }
  r.alpha = 1.0 - r.observed_disagreement / r.expected_disagreement;
  return r;
}

double krippendorff_alpha(std::span<const AnnotationRecord> records) {
  return alpha_details(records).alpha;
}

nlohmann::json AnnotatorSummary::demographics() const {
  std::map<std::string, std::map<std::string, std::size_t>> table;
  for (const auto& a : roster) {
    ++table["gender"][a.gender];
    ++table["higher_education"][a.higher_education];
    ++table["medium_of_schooling"][a.schooling_medium];
  }
  nlohmann::json j = table;
  j["total"] = roster.size();
  return j;
}

nlohmann::json AnnotatorSummary::to_json() const {
  nlohmann::json counts_json = nlohmann::json::object();
  for (const auto& [id, count] : counts) counts_json[id] = count;
  nlohmann::json roster_json = nlohmann::json::array();
  for (const auto& a : roster) {
    roster_json.push_back({{"annotator_id", a.annotator_id},
                           {"gender", a.gender},
                           {"higher_education", a.higher_education},
                           {"medium_of_schooling", a.schooling_medium}});
  }
  return {{"counts", counts_json},
          {"roster", roster_json},
          {"demographics", demographics()},
          {"warnings", warnings}};
}

AnnotatorSummary annotator_summary(std::span<const AnnotationRecord> records,
                                   std::span<const AnnotatorInfo> roster) {
  AnnotatorSummary s;
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) ++counts[r.annotator_id];
  s.counts.assign(counts.begin(), counts.end());
  s.roster.assign(roster.begin(), roster.end());
  for (const auto& [id, count] : counts) {
    const bool known = std::any_of(roster.begin(), roster.end(),
                                   [&](const AnnotatorInfo& a) { return a.annotator_id == id; });
    if (!known) s.warnings.push_back("annotator '" + id + "' is not in the roster");
  }
  return s;
}

namespace {

std::vector<std::size_t> require_columns(const csv::Row& header,
                                         std::initializer_list<std::string_view> names) {
  std::vector<std::size_t> cols;
  for (auto name : names) {
    auto it = std::find(header.fields.begin(), header.fields.end(), name);
    if (it == header.fields.end()) {
      throw ValidationError("header is missing column '" + std::string(name) + "'");
    }
    cols.push_back(static_cast<std::size_t>(it - header.fields.begin()));
  }
  return cols;
}

}  // namespace

std::vector<AnnotationRecord> parse_annotations(std::string_view content,
                                                const corpus::LabelMap& labels) {
  const auto rows = csv::parse(content);
  if (rows.empty()) throw ValidationError("annotations file has no header");
  const auto cols = require_columns(rows[0], {"unit_id", "annotator_id", "label"});
  std::vector<AnnotationRecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != rows[0].fields.size()) {
      throw corpus::DataError(r + 1, "wrong number of fields");
    }
    const auto label = labels.lookup(f[cols[2]]);
    if (!label) throw corpus::DataError(r + 1, "unknown label '" + f[cols[2]] + "'");
    records.push_back({f[cols[0]], f[cols[1]], *label});
  }
  return records;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path,
                                               const corpus::LabelMap& labels) {
  return parse_annotations(read_file(path), labels);
}

std::vector<AnnotatorInfo> parse_roster(std::string_view content) {
  const auto rows = csv::parse(content);
  if (rows.empty()) throw ValidationError("roster file has no header");
  const auto cols = require_columns(
      rows[0], {"annotator_id", "gender", "higher_education", "medium_of_schooling"});
  std::vector<AnnotatorInfo> roster;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != rows[0].fields.size()) {
      throw corpus::DataError(r + 1, "wrong number of fields");
    }
    roster.push_back({f[cols[0]], f[cols[1]], f[cols[2]], f[cols[3]]});
  }
  return roster;
}

std::vector<AnnotatorInfo> load_roster(const std::filesystem::path& path) {
  return parse_roster(read_file(path));
}

}  // namespace hopebench::agreement
