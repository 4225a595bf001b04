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

#include "hopebench/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hopebench/csv.hpp"
#include "hopebench/features.hpp"
#include "hopebench/random.hpp"
#include "hopebench/text.hpp"

namespace hopebench::corpus {

std::string_view label_name(Label label) {
  switch (label) {
    case Label::Hope:
      return "Hope";
    case Label::NotHope:
      return "Not-Hope";
    case Label::NotKannada:
      return "Not-Kannada";
  }
  return "?";
}

int class_index(Label label) {
  switch (label) {
    case Label::NotHope:
      return 0;
    case Label::Hope:
      return 1;
    case Label::NotKannada:
      break;
  }
  throw ValidationError("Not-Kannada has no class index; filter it out before training");
}

Label label_from_class(int index) {
  if (index == 0) return Label::NotHope;
  if (index == 1) return Label::Hope;
  throw ValidationError("class index out of range: " + std::to_string(index));
}

Label parse_label_variant(std::string_view variant) {
  if (variant == "Hope") return Label::Hope;
  if (variant == "NotHope" || variant == "Not-Hope") return Label::NotHope;
  if (variant == "NotKannada" || variant == "Not-Kannada") return Label::NotKannada;
  throw ValidationError("unknown label variant '" + std::string(variant) + "'");
}

LabelMap LabelMap::defaults() {
  LabelMap m;
  for (Label l : kAllLabels) m.add(std::string(label_name(l)), l);
  return m;
}

LabelMap LabelMap::parse(std::string_view spec) {
  LabelMap m;
  std::stringstream ss{std::string(spec)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("label map entry '" + item + "' is not spelling=Variant");
    }
    m.add(item.substr(0, eq), parse_label_variant(item.substr(eq + 1)));
  }
  return m;
}

std::optional<Label> LabelMap::lookup(std::string_view spelling) const {
  auto it = map_.find(spelling);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

Dataset::Dataset(std::string name, std::vector<Comment> comments)
    : name_(std::move(name)), comments_(std::move(comments)) {
  std::unordered_set<std::int64_t> seen;
  seen.reserve(comments_.size());
  for (const auto& c : comments_) {
    if (!seen.insert(c.id).second) {
      throw ValidationError("duplicate comment id " + std::to_string(c.id) + " in dataset '" +
                            name_ + "'");
    }
  }
}

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      comments_.begin(), comments_.end(), [&](const Comment& c) { return c.label == label; }));
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim_bom(std::string_view s) {
  if (s.starts_with("\xEF\xBB\xBF")) s.remove_prefix(3);
  return std::string(s);
}

}  // namespace

Dataset parse_dataset(std::string_view content, std::string name, const LabelMap& labels) {
  const std::string body = trim_bom(content);
  if (!text::is_valid_utf8(body)) {
    // Locate the offending record for the error message.
    std::size_t line = 1;
    for (std::size_t i = 0; i < body.size(); ++i) {
      std::size_t end = body.find('\n', i);
      if (end == std::string::npos) end = body.size();
      if (!text::is_valid_utf8(std::string_view(body).substr(i, end - i))) {
        throw DataError(line, "non-UTF-8 bytes");
      }
      i = end;
      ++line;
    }
    throw DataError(line, "non-UTF-8 bytes");
  }
  const auto rows = csv::parse(body);
  if (rows.empty()) throw DataError(1, "missing header row");

  const auto& header = rows.front().fields;
  auto column = [&](std::string_view col) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == col) return i;
    }
    return std::nullopt;
  };
  const auto text_col = column("text");
  const auto label_col = column("label");
  const auto translation_col = column("translation");
  const auto id_col = column("id");
  if (!text_col || !label_col) throw DataError(1, "header must contain 'text' and 'label'");

  std::vector<Comment> comments;
  comments.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r].fields;
    const std::size_t row_number = r + 1;
    if (fields.size() != header.size()) {
      throw DataError(row_number, "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
    }
    Comment c;
    c.text = fields[*text_col];
    if (text::split_whitespace(c.text).empty()) throw DataError(row_number, "empty text");
    const auto label = labels.lookup(fields[*label_col]);
    if (!label) throw DataError(row_number, "unknown label '" + fields[*label_col] + "'");
    c.label = *label;
    if (translation_col && !fields[*translation_col].empty()) {
      c.translation = fields[*translation_col];
    }
    if (id_col) {
      try {
        std::size_t used = 0;
        c.id = std::stoll(fields[*id_col], &used);
        if (used != fields[*id_col].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DataError(row_number, "id '" + fields[*id_col] + "' is not an integer");
      }
    } else {
      c.id = static_cast<std::int64_t>(r - 1);
    }
    comments.push_back(std::move(c));
  }
  return Dataset(std::move(name), std::move(comments));
}

Dataset load_dataset(const std::filesystem::path& path, const LabelMap& labels) {
  if (!std::filesystem::exists(path)) throw ValidationError("no such file: " + path.string());
  return parse_dataset(read_file(path), path.stem().string(), labels);
}

std::string serialize_dataset(const Dataset& d) {
  const bool with_translation = std::any_of(
      d.begin(), d.end(), [](const Comment& c) { return c.translation.has_value(); });
  std::string out = with_translation ? "id,text,label,translation\n" : "id,text,label\n";
  for (const auto& c : d) {
    std::vector<std::string> fields = {std::to_string(c.id), c.text,
                                       std::string(label_name(c.label))};
    if (with_translation) fields.push_back(c.translation.value_or(""));
    out += csv::format_row(fields);
  }
  return out;
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << serialize_dataset(d);
}

Dataset concatenate(std::span<const Dataset> parts, std::string name) {
  std::vector<Comment> all;
  for (const auto& p : parts) {
    for (const auto& c : p) {
      all.push_back(c);
      all.back().id = static_cast<std::int64_t>(all.size() - 1);
    }
  }
  return Dataset(std::move(name), std::move(all));
}

Dataset filter_labels(const Dataset& d, std::span<const Label> keep) {
  if (keep.empty()) throw ValidationError("filter_labels: keep set is empty");
  std::vector<Comment> kept;
  for (const auto& c : d) {
    if (std::find(keep.begin(), keep.end(), c.label) != keep.end()) kept.push_back(c);
  }
  if (kept.empty()) {
    throw EmptyResultError("no comments left in '" + d.name() + "' after label filtering");
  }
  return Dataset(d.name(), std::move(kept));
}

void SplitSpec::validate() const {
  for (double f : {train_fraction, dev_fraction, test_fraction}) {
    if (!(f > 0.0 && f < 1.0)) {
      throw ValidationError("split fractions must each lie in (0, 1)");
    }
  }
  if (std::abs(train_fraction + dev_fraction + test_fraction - 1.0) > 1e-9) {
    throw ValidationError("split fractions must sum to 1");
  }
}

std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitSpec& spec) {
  spec.validate();
  const auto nd = static_cast<double>(n);
  const auto dev = static_cast<std::size_t>(std::floor(nd * spec.dev_fraction + 0.5));
  const auto test = static_cast<std::size_t>(std::floor(nd * spec.test_fraction + 0.5));
  if (dev + test >= n) return {0, dev, test};
  return {n - dev - test, dev, test};
}

namespace {

// Largest-remainder apportionment of `total` across groups with quotas
// proportional to `weights`, never exceeding `capacity`.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<std::size_t>& weights,
                                   const std::vector<std::size_t>& capacity) {
  const double weight_sum =
      static_cast<double>(std::accumulate(weights.begin(), weights.end(), std::size_t{0}));
  std::vector<std::size_t> alloc(weights.size(), 0);
  std::vector<double> remainder(weights.size(), 0.0);
  std::size_t given = 0;
  for (std::size_t c = 0; c < weights.size(); ++c) {
    const double quota = static_cast<double>(total) * static_cast<double>(weights[c]) / weight_sum;
    alloc[c] = std::min(static_cast<std::size_t>(std::floor(quota)), capacity[c]);
    remainder[c] = quota - std::floor(quota);
    given += alloc[c];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  while (given < total) {
    bool progressed = false;
    for (std::size_t c : order) {
      if (given < total && alloc[c] < capacity[c]) {
        ++alloc[c];
        ++given;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return alloc;
}

Dataset gather(const Dataset& d, std::vector<std::size_t> positions, std::string suffix) {
  std::sort(positions.begin(), positions.end());
  std::vector<Comment> out;
  out.reserve(positions.size());
  for (std::size_t p : positions) out.push_back(d[p]);
  return Dataset(d.name() + suffix, std::move(out));
}

}  // namespace

SplitResult split(const Dataset& d, const SplitSpec& spec) {
  if (d.empty()) throw EmptyResultError("cannot split an empty dataset");
  const auto sizes = split_sizes(d.size(), spec);
  if (sizes[0] == 0 || sizes[1] == 0 || sizes[2] == 0) {
    throw EmptyResultError("split of " + std::to_string(d.size()) +
                           " comments leaves a part empty");
  }
  Rng rng(derive_seed(spec.seed, "split"));
  std::array<std::vector<std::size_t>, 3> parts;

  if (!spec.stratified) {
    std::vector<std::size_t> idx(d.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(std::span(idx));
    parts[0].assign(idx.begin(), idx.begin() + sizes[0]);
    parts[1].assign(idx.begin() + sizes[0], idx.begin() + sizes[0] + sizes[1]);
    parts[2].assign(idx.begin() + sizes[0] + sizes[1], idx.end());
  } else {
    std::vector<std::vector<std::size_t>> by_class;
    for (Label l : kAllLabels) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i].label == l) members.push_back(i);
      }
      if (!members.empty()) by_class.push_back(std::move(members));
    }
    std::vector<std::size_t> weights;
    for (const auto& m : by_class) weights.push_back(m.size());
    std::vector<std::size_t> remaining = weights;
    std::array<std::vector<std::size_t>, 3> alloc;
    for (int p = 0; p < 2; ++p) {
      alloc[p] = apportion(sizes[p], weights, remaining);
      for (std::size_t c = 0; c < remaining.size(); ++c) remaining[c] -= alloc[p][c];
    }
    alloc[2] = remaining;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      auto& members = by_class[c];
      rng.shuffle(std::span(members));
      auto it = members.begin();
      for (int p = 0; p < 3; ++p) {
        parts[p].insert(parts[p].end(), it, it + static_cast<std::ptrdiff_t>(alloc[p][c]));
        it += static_cast<std::ptrdiff_t>(alloc[p][c]);
      }
    }
  }
  for (const auto& p : parts) {
    if (p.empty()) throw EmptyResultError("split leaves a part empty");
  }
  return {gather(d, parts[0], "-train"), gather(d, parts[1], "-dev"),
          gather(d, parts[2], "-test")};
}

nlohmann::json CorpusStats::to_json() const {
  return {{"posts", num_posts},
          {"tokens", num_tokens},
          {"vocab", vocab_size},
          {"sentences", num_sentences},
          {"tokens_per_post", tokens_per_post},
          {"sentences_per_post", sentences_per_post}};
}

std::size_t count_sentences(std::string_view text) {
  std::size_t n = 0;
  for (const auto& s : text::split_sentences(text)) {
    if (!features::tokenize(s).empty()) ++n;
  }
  return n;
}

CorpusStats corpus_stats(const Dataset& d) {
  CorpusStats s;
  std::unordered_set<std::string> vocab;
  for (const auto& c : d) {
    auto tokens = features::tokenize(c.text);
    s.num_tokens += tokens.size();
    for (auto& t : tokens) vocab.insert(std::move(t));
    s.num_sentences += count_sentences(c.text);
  }
  s.num_posts = d.size();
  s.vocab_size = vocab.size();
  if (s.num_posts > 0) {
    s.tokens_per_post = s.num_tokens / s.num_posts;
    s.sentences_per_post = s.num_sentences / s.num_posts;
  }
  return s;
}

}  // namespace hopebench::corpus
