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

#include "hopebench/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace hopebench::metrics {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) {
    for (auto v : row) t += v;
  }
  return t;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
  return t;
}

std::uint64_t ConfusionMatrix::support(std::size_t c) const {
  std::uint64_t t = 0;
  for (auto v : counts.at(c)) t += v;
  return t;
}

std::uint64_t ConfusionMatrix::predicted(std::size_t c) const {
  std::uint64_t t = 0;
  for (const auto& row : counts) t += row.at(c);
  return t;
}

ConfusionMatrix ConfusionMatrix::from_counts(std::vector<std::vector<std::uint64_t>> counts,
                                             std::vector<std::string> class_names) {
  if (counts.empty() || counts.size() != class_names.size()) {
    throw ValidationError("confusion matrix needs one row per class name");
  }
  for (const auto& row : counts) {
    if (row.size() != counts.size()) throw ValidationError("confusion matrix must be square");
  }
  return {std::move(counts), std::move(class_names)};
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          std::vector<std::string> class_names) {
  if (y_true.size() != y_pred.size()) {
    throw ValidationError("confusion: " + std::to_string(y_true.size()) + " true labels but " +
                          std::to_string(y_pred.size()) + " predictions");
  }
  const std::size_t k = class_names.size();
  if (k == 0) throw ValidationError("confusion: no classes");
  ConfusionMatrix m{std::vector(k, std::vector<std::uint64_t>(k, 0)), std::move(class_names)};
  for (std::size_t t = 0; t < y_true.size(); ++t) {
    for (int label : {y_true[t], y_pred[t]}) {
      if (label < 0 || static_cast<std::size_t>(label) >= k) {
        throw ValidationError("confusion: unknown label " + std::to_string(label) + " at " +
                              std::to_string(t));
      }
    }
    ++m.counts[static_cast<std::size_t>(y_true[t])][static_cast<std::size_t>(y_pred[t])];
  }
  return m;
}

namespace {

Scores from_ratios(double tp, double fp, double fn) {
  Scores s;
  if (tp + fp > 0) {
    s.precision = tp / (tp + fp);
  } else {
    s.degenerate = true;
  }
  if (tp + fn > 0) {
    s.recall = tp / (tp + fn);
  } else {
    s.degenerate = true;
  }
  if (s.precision + s.recall > 0) {
    s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  } else {
    s.degenerate = true;
  }
  return s;
}

}  // namespace

Scores prf(const ConfusionMatrix& m, std::size_t c) {
  if (c >= m.num_classes()) throw ValidationError("prf: class index out of range");
  const auto tp = static_cast<double>(m.counts[c][c]);
  const auto fp = static_cast<double>(m.predicted(c)) - tp;
  const auto fn = static_cast<double>(m.support(c)) - tp;
  return from_ratios(tp, fp, fn);
}

double accuracy(const ConfusionMatrix& m) {
  const auto total = m.total();
  if (total == 0) throw EmptyResultError("accuracy of an empty confusion matrix");
  return static_cast<double>(m.trace()) / static_cast<double>(total);
}

Scores averages(const ConfusionMatrix& m, Average mode) {
  const auto total = m.total();
  if (total == 0) throw EmptyResultError("averages of an empty confusion matrix");
  if (mode == Average::Micro) {
    // Pooled over classes every false positive is some class's false negative.
    const auto tp = static_cast<double>(m.trace());
    return from_ratios(tp, static_cast<double>(total) - tp, static_cast<double>(total) - tp);
  }
  Scores out;
  const std::size_t k = m.num_classes();
  for (std::size_t c = 0; c < k; ++c) {
    const Scores s = prf(m, c);
    const double w = mode == Average::Macro
                         ? 1.0 / static_cast<double>(k)
                         : static_cast<double>(m.support(c)) / static_cast<double>(total);
    out.precision += w * s.precision;
    out.recall += w * s.recall;
    out.f1 += w * s.f1;
    out.degenerate = out.degenerate || s.degenerate;
  }
  return out;
}

EvalReport evaluate(std::string model, std::uint64_t seed, const ConfusionMatrix& m) {
  EvalReport r;
  r.model = std::move(model);
  r.seeds = {seed};
  for (std::size_t c = 0; c < m.num_classes(); ++c) {
    r.per_class.push_back({m.class_names[c], prf(m, c), m.support(c)});
  }
  r.accuracy = accuracy(m);
  r.macro = averages(m, Average::Macro);
  r.weighted = averages(m, Average::Weighted);
  r.confusion = m;
  return r;
}

EvalReport mean_report(std::span<const EvalReport> runs) {
  if (runs.empty()) throw ValidationError("mean_report: no runs");
  const EvalReport& first = runs.front();
  EvalReport out;
  out.model = first.model;
  out.confusion = first.confusion;
  for (auto& row : out.confusion.counts) std::fill(row.begin(), row.end(), 0);
  out.per_class = first.per_class;
  for (auto& c : out.per_class) c.scores = {};

  const double n = static_cast<double>(runs.size());
  auto add = [n](Scores& into, const Scores& s) {
    into.precision += s.precision / n;
    into.recall += s.recall / n;
    into.f1 += s.f1 / n;
    into.degenerate = into.degenerate || s.degenerate;
  };
  for (const auto& run : runs) {
    if (run.model != first.model || run.per_class.size() != first.per_class.size() ||
        run.confusion.class_names != first.confusion.class_names) {
      throw ValidationError("mean_report: runs describe different models or classes");
    }
    out.seeds.insert(out.seeds.end(), run.seeds.begin(), run.seeds.end());
    for (std::size_t c = 0; c < run.per_class.size(); ++c) {
      if (run.per_class[c].support != first.per_class[c].support) {
        throw ValidationError("mean_report: runs were evaluated on different test sets");
      }
      add(out.per_class[c].scores, run.per_class[c].scores);
    }
    out.accuracy += run.accuracy / n;
    add(out.macro, run.macro);
    add(out.weighted, run.weighted);
    for (std::size_t i = 0; i < run.confusion.num_classes(); ++i) {
      for (std::size_t j = 0; j < run.confusion.num_classes(); ++j) {
        out.confusion.counts[i][j] += run.confusion.counts[i][j];
      }
    }
  }
  return out;
}

namespace {

nlohmann::json scores_json(const Scores& s) {
  nlohmann::json j = {{"p", s.precision}, {"r", s.recall}, {"f1", s.f1}};
  if (s.degenerate) j["degenerate"] = true;
  return j;
}

Scores scores_from(const nlohmann::json& j) {
  return {j.at("p").get<double>(), j.at("r").get<double>(), j.at("f1").get<double>(),
          j.value("degenerate", false)};
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
  nlohmann::json per = nlohmann::json::object();
  nlohmann::json order = nlohmann::json::array();
  for (const auto& c : per_class) {
    auto j = scores_json(c.scores);
    j["support"] = c.support;
    per[c.name] = std::move(j);
    order.push_back(c.name);
  }
  nlohmann::json j = {{"model", model},
                      {"seeds", seeds},
                      {"classes", std::move(order)},
                      {"per_class", std::move(per)},
                      {"accuracy", accuracy},
                      {"macro", scores_json(macro)},
                      {"weighted", scores_json(weighted)},
                      {"confusion", confusion.counts}};
  if (timestamp) j["timestamp"] = *timestamp;
  return j;
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.model = j.at("model").get<std::string>();
    j.at("seeds").get_to(r.seeds);
    std::vector<std::string> names = j.at("classes").get<std::vector<std::string>>();
    for (const auto& name : names) {
      const auto& c = j.at("per_class").at(name);
      r.per_class.push_back({name, scores_from(c), c.at("support").get<std::uint64_t>()});
    }
    r.accuracy = j.at("accuracy").get<double>();
    r.macro = scores_from(j.at("macro"));
    r.weighted = scores_from(j.at("weighted"));
    r.confusion = ConfusionMatrix::from_counts(
        j.at("confusion").get<std::vector<std::vector<std::uint64_t>>>(), std::move(names));
    if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed evaluation report: ") + e.what());
  }
}

std::string render_table(std::span<const EvalReport> reports) {
  if (reports.empty()) throw ValidationError("render_table: no reports");
  const auto& classes = reports.front().per_class;

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"Model"};
  for (std::size_t c = 0; c < classes.size(); ++c) header.insert(header.end(), {"P", "R", "F1"});
  header.insert(header.end(), {"Acc", "W(P)", "W(R)", "W(F1)"});
  rows.push_back({});  // class names, rendered separately
  rows.push_back(header);

  bool any_degenerate = false;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  for (const auto& r : reports) {
    if (r.per_class.size() != classes.size()) {
      throw ValidationError("render_table: reports have different classes");
    }
    std::vector<std::string> row = {r.model};
    for (const auto& c : r.per_class) {
      const std::string mark = c.scores.degenerate ? "*" : "";
      any_degenerate = any_degenerate || c.scores.degenerate;
      row.insert(row.end(), {fmt(c.scores.precision) + mark, fmt(c.scores.recall) + mark,
                             fmt(c.scores.f1) + mark});
    }
    row.insert(row.end(), {fmt(r.accuracy), fmt(r.weighted.precision), fmt(r.weighted.recall),
                           fmt(r.weighted.f1)});
    rows.push_back(std::move(row));
  }

  // Column widths ignore the class-name row, whose labels span three columns.
  std::vector<std::size_t> width(rows[1].size(), 0);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      width[i] = std::max(width[i], rows[r][i].size());
    }
  }
  std::ostringstream out;
  auto emit = [&out](std::string line) {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  std::string line(width[0], ' ');
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const std::size_t first = 1 + 3 * c;
    const std::size_t span = width[first] + width[first + 1] + width[first + 2] + 4;
    std::string label = classes[c].name.substr(0, span);
    label.append(span - label.size(), ' ');
    line += "  " + label;
  }
  emit(line);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    line.clear();
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i > 0) line += "  ";
      line += rows[r][i];
      line.append(width[i] - rows[r][i].size(), ' ');
    }
    emit(line);
  }
  if (any_degenerate) out << "* zero denominator, reported as 0\n";
  return out.str();
}

}  // namespace hopebench::metrics
