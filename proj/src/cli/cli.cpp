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

#include "hopebench/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hopebench/agreement.hpp"
#include "hopebench/classifiers.hpp"
#include "hopebench/corpus.hpp"
#include "hopebench/dualchannel.hpp"
#include "hopebench/features.hpp"
#include "hopebench/metrics.hpp"
#include "hopebench/preprocess.hpp"
#include "hopebench/random.hpp"
#include "hopebench/translation.hpp"

namespace hopebench::cli {

namespace {

namespace fs = std::filesystem;
namespace dc = dualchannel;
using nlohmann::json;

constexpr int kManifestFormat = 1;

// --- files -------------------------------------------------------------------

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// Lines holding a "timestamp" key are left out so that replays compare equal.
std::string digest(const std::string& content) {
  std::string kept;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(' ');
    if (start != std::string::npos && line.compare(start, 12, "\"timestamp\":") == 0) continue;
    kept += line;
    kept += '\n';
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(kept)));
  return buf;
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string slug(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "model" : out;
}

// --- resolved command line ---------------------------------------------------------

// One subcommand level of the resolved command line.
struct Level {
  std::string name;
  std::vector<std::pair<std::string, std::vector<std::string>>> options;
};

const std::set<std::string> kNotRecorded = {"--help", "--help-all", "--config", "--out", "--seed"};

Level capture(const CLI::App& app) {
  Level level{app.get_name(), {}};
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_name();
    if (kNotRecorded.count(name) || opt->count() == 0) continue;
    if (opt->get_expected_min() == 0) {
      // Flags carry their value inline: --name=true.
      level.options.emplace_back(name + (opt->as<bool>() ? "=true" : "=false"),
                                 std::vector<std::string>{});
    } else {
      level.options.emplace_back(name, opt->results());
    }
  }
  return level;
}

struct Context {
  std::uint64_t seed = 0;
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;
  std::vector<Level> levels;  // subcommand chain below the root
  std::map<std::string, std::string> outputs;  // relative path -> digest
  std::string command;

  Context(std::ostream& o, std::ostream& e) : out(o), err(e) {}

  void warn(const std::string& message) const { err << "warning: " << message << '\n'; }

  fs::path dir(const char* name) const {
    const fs::path d = out_dir / name;
    fs::create_directories(d);
    return d;
  }

  /// Notes a written file for the manifest; files outside --out are not tracked.
  void record(const fs::path& path, const std::string& content) {
    const auto rel = fs::absolute(path).lexically_normal().lexically_relative(
        fs::absolute(out_dir).lexically_normal());
    if (rel.empty() || *rel.begin() == "..") return;
    outputs[rel.generic_string()] = digest(content);
  }

  void write(const fs::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << content)) throw RuntimeFailure("cannot write " + path.string());
    record(path, content);
  }

  void write_json(const fs::path& path, const json& j) { write(path, j.dump(2) + "\n"); }

  /// Replaces an option of the innermost subcommand in the recorded command
  /// line, e.g. to pin a defaulted input path.
  void pin(const std::string& name, std::vector<std::string> values) {
    auto& opts = levels.back().options;
    for (auto& [n, v] : opts) {
      if (n == name) {
        v = std::move(values);
        return;
      }
    }
    opts.emplace_back(name, std::move(values));
  }

  /// Resolves an input path (defaulting under --out), pins it absolute and
  /// returns it.
  fs::path input(const std::string& option, const std::string& given, const fs::path& fallback) {
    fs::path p = given.empty() ? out_dir / fallback : fs::path(given);
    if (!fs::exists(p)) throw ValidationError(option + ": no such file " + p.string());
    p = fs::absolute(p).lexically_normal();
    pin(option, {p.string()});
    return p;
  }

  std::vector<fs::path> inputs(const std::string& option, const std::vector<std::string>& given) {
    std::vector<fs::path> paths;
    std::vector<std::string> pinned;
    for (const auto& g : given) {
      fs::path p(g);
      if (!fs::exists(p)) throw ValidationError(option + ": no such file " + g);
      p = fs::absolute(p).lexically_normal();
      paths.push_back(p);
      pinned.push_back(p.string());
    }
    if (!pinned.empty()) pin(option, pinned);
    return paths;
  }

  std::vector<std::string> argv() const {
    std::vector<std::string> args;
    for (const auto& level : levels) {
      args.push_back(level.name);
      for (const auto& [name, values] : level.options) {
        if (values.empty()) args.push_back(name);
        for (const auto& v : values) {
          args.push_back(name);
          args.push_back(v);
        }
      }
    }
    return args;
  }

  /// Skipped when nothing was written, e.g. `clean --text`.
  void write_manifest() {
    if (outputs.empty()) return;
    json m = {{"tool", "hopebench"},
              {"format", kManifestFormat},
              {"command", command},
              {"seed", seed},
              {"argv", argv()},
              {"timestamp", timestamp_now()},
              {"outputs", outputs}};
    std::string name;
    for (const auto& level : levels) name += (name.empty() ? "" : "-") + level.name;
    const fs::path path = dir("manifests") / (name + ".json");
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << m.dump(2) << '\n')) throw RuntimeFailure("cannot write " + path.string());
  }
};

// --- shared data preparation ----------------------------------------------------------

corpus::LabelMap label_map(const std::string& spec) {
  auto labels = corpus::LabelMap::defaults();
  if (!spec.empty()) labels.merge(corpus::LabelMap::parse(spec));
  return labels;
}

corpus::Dataset load_all(const std::vector<fs::path>& paths, const corpus::LabelMap& labels) {
  if (paths.size() == 1) return corpus::load_dataset(paths[0], labels);
  std::vector<corpus::Dataset> parts;
  for (const auto& p : paths) parts.push_back(corpus::load_dataset(p, labels));
  return corpus::concatenate(parts, "combined");
}

// Drops Not-Kannada rows, which have no binary class.
corpus::Dataset binary_only(const corpus::Dataset& d, const Context& ctx) {
  const std::size_t dropped = d.count(corpus::Label::NotKannada);
  if (dropped == 0) return d;
  ctx.warn("ignoring " + std::to_string(dropped) + " Not-Kannada comments in " + d.name());
  const std::array keep = {corpus::Label::Hope, corpus::Label::NotHope};
  return corpus::filter_labels(d, keep);
}

std::string prepare(std::string_view text, bool clean) {
  return clean ? preprocess::clean(text) : std::string(text);
}

std::vector<std::vector<std::string>> token_docs(const corpus::Dataset& d, bool clean) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(d.size());
  for (const auto& c : d) docs.push_back(features::tokenize(prepare(c.text, clean)));
  return docs;
}

std::vector<int> class_labels(const corpus::Dataset& d) {
  std::vector<int> y;
  y.reserve(d.size());
  for (const auto& c : d) y.push_back(corpus::class_index(c.label));
  return y;
}

struct Features {
  features::TfidfModel model;
  bool clean = true;
};

Features load_features(const fs::path& path) {
  const json j = read_json(path);
  return {features::TfidfModel::from_json(j), j.value("clean", true)};
}

std::string display_name(std::string_view kind) {
  if (kind == "logreg") return "Logistic Regression";
  if (kind == "naive_bayes") return "Naive Bayes";
  if (kind == "knn") return "KNN";
  if (kind == "tree") return "Decision Tree";
  if (kind == "forest") return "Random Forest";
  if (kind == "dual_channel") return "Dual-Channel";
  return std::string(kind);
}

// --- translation ---------------------------------------------------------------------

struct TranslationOptions {
  std::string cache;
  std::string url;

  json to_json() const {
    return {{"cache", cache.empty() ? json(nullptr) : json(cache)},
            {"url", url.empty() ? json(nullptr) : json(url)}};
  }
  static TranslationOptions from_json(const json& j) {
    TranslationOptions t;
    if (!j.at("cache").is_null()) t.cache = j.at("cache").get<std::string>();
    if (!j.at("url").is_null()) t.url = j.at("url").get<std::string>();
    return t;
  }
  dc::TranslationProvider provider() const {
    if (!url.empty()) {
      return dc::TranslationProvider::http(
          url, cache.empty() ? std::nullopt : std::optional<fs::path>(cache));
    }
    if (!cache.empty()) return dc::TranslationProvider::file_cache(cache);
    return dc::TranslationProvider::identity();
  }
};

struct ChannelData {
  std::vector<dc::Example> examples;
  std::size_t misses = 0;
};

ChannelData channel_examples(const corpus::Dataset& d, const dc::TokenizerHash& tokenizer,
                             dc::TranslationProvider& provider, bool clean, std::size_t channels) {
  ChannelData data;
  for (const auto& c : d) {
    dc::Example x;
    x.label = corpus::class_index(c.label);
    x.channels.push_back(tokenizer.encode(prepare(c.text, clean)));
    if (channels > 1) {
      std::string english;
      if (c.translation) {
        english = *c.translation;
      } else {
        auto t = provider.translate(c.text);
        data.misses += t.miss ? 1 : 0;
        english = std::move(t.text);
      }
      x.channels.push_back(tokenizer.encode(prepare(english, clean)));
    }
    data.examples.push_back(std::move(x));
  }
  return data;
}

void report_translation(const Context& ctx, const dc::TranslationProvider& provider,
                        const ChannelData& data, const char* which) {
  for (const auto& w : provider.warnings()) ctx.warn(w);
  if (data.misses > 0) {
    ctx.warn(std::to_string(data.misses) + " " + which +
             " comments have no translation; their untranslated text fills the second channel");
  }
}

// --- command options -------------------------------------------------------------------

struct Options {
  // shared
  std::vector<std::string> in;
  std::string label_map;
  std::string text;
  bool clean = true;

  // stats / split
  bool drop_not_kannada = false;
  bool keep_not_kannada = false;
  std::vector<double> fractions = {0.8, 0.1, 0.1};
  bool stratified = true;

  // clean / codemix
  std::string output;
  std::string emoji_table;
  std::string lexicon;
  std::string neutral;
  double english_low = preprocess::CodeMixConfig{}.english_low;
  double english_high = preprocess::CodeMixConfig{}.english_high;

  // agreement
  std::string annotations;
  std::string roster;

  // featurize / train / eval
  std::string train;
  std::string dev;
  std::string test;
  std::string features;
  std::string analyzer = "word";
  std::vector<int> ngram_range = {1, 5};
  std::size_t min_df = 1;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> models;
  std::string name;

  classifiers::LogRegConfig logreg;
  double nb_alpha = 1.0;
  int knn_k = 3;
  double knn_p = 2.0;
  classifiers::TreeConfig tree;
  classifiers::ForestConfig forest;
  std::string max_features = "sqrt";

  // dual channel
  std::size_t dim = 64;
  std::uint32_t vocab = 1u << 15;
  std::size_t max_length = 128;
  std::size_t channels = 2;
  std::string fusion = "scalar";
  dc::TrainConfig dc_train;
  TranslationOptions translation;

  // gradcheck
  int gc_models = 10;
  std::size_t gc_batch = 4;

  // replay
  std::string manifest;
};

// --- commands --------------------------------------------------------------------

void cmd_stats(Context& ctx, const Options& o) {
  auto d = load_all(ctx.inputs("--in", o.in), label_map(o.label_map));
  if (o.drop_not_kannada) {
    const std::array keep = {corpus::Label::Hope, corpus::Label::NotHope};
    d = corpus::filter_labels(d, keep);
  }
  json j = corpus::corpus_stats(d).to_json();
  json labels = json::object();
  for (auto l : corpus::kAllLabels) labels[std::string(corpus::label_name(l))] = d.count(l);
  j["labels"] = labels;
  ctx.write_json(ctx.dir("reports") / "stats.json", j);
  ctx.out << j.dump(2) << '\n';
}

void cmd_clean(Context& ctx, const Options& o) {
  const auto emoji = o.emoji_table.empty()
                         ? preprocess::EmojiMap::builtin()
                         : preprocess::EmojiMap::load(ctx.input("--emoji-table", o.emoji_table, {}));
  if (!o.text.empty()) {
    ctx.out << preprocess::clean(o.text, emoji) << '\n';
    return;
  }
  if (o.in.size() != 1) throw ValidationError("clean: give one --in file or --text");
  const auto path = ctx.inputs("--in", o.in)[0];
  const auto d = corpus::load_dataset(path, label_map(o.label_map));
  std::vector<corpus::Comment> cleaned;
  std::size_t emptied = 0;
  for (auto c : d) {
    c.text = preprocess::clean(c.text, emoji);
    if (c.text.find_first_not_of(' ') == std::string::npos) {
      ++emptied;
      continue;
    }
    cleaned.push_back(std::move(c));
  }
  if (emptied > 0) ctx.warn("dropped " + std::to_string(emptied) + " comments left empty by cleaning");
  const corpus::Dataset result(d.name(), std::move(cleaned));
  const fs::path target = o.output.empty()
                              ? ctx.dir("splits") / (path.stem().string() + ".clean.csv")
                              : fs::path(o.output);
  fs::create_directories(fs::absolute(target).parent_path());
  ctx.write(target, corpus::serialize_dataset(result));
  ctx.out << "cleaned " << result.size() << " comments -> " << target.string() << '\n';
}

void cmd_codemix(Context& ctx, const Options& o) {
  const preprocess::Lexicon lexicon =
      o.lexicon.empty() ? preprocess::Lexicon::builtin()
                        : preprocess::Lexicon::load(
                              ctx.input("--lexicon", o.lexicon, {}),
                              o.neutral.empty() ? std::nullopt
                                                : std::optional<fs::path>(
                                                      ctx.input("--neutral", o.neutral, {})));
  const preprocess::CodeMixConfig config{o.english_low, o.english_high};
  if (!(config.english_low >= 0 && config.english_low <= config.english_high &&
        config.english_high <= 1)) {
    throw ValidationError("need 0 <= --english-low <= --english-high <= 1");
  }
  if (!o.text.empty()) {
    const auto profile = preprocess::codemix_type(o.text, lexicon, config);
    ctx.out << profile.to_json().dump(2) << '\n';
    return;
  }
  if (o.in.size() != 1) throw ValidationError("codemix: give one --in file or --text");
  const auto d = corpus::load_dataset(ctx.inputs("--in", o.in)[0], label_map(o.label_map));
  std::string lines;
  std::map<std::string, std::size_t> counts;
  for (const auto& c : d) {
    auto j = preprocess::codemix_type(c.text, lexicon, config).to_json();
    ++counts[j.at("mix_type").get<std::string>()];
    j["id"] = c.id;
    lines += j.dump() + '\n';
  }
  ctx.write(ctx.dir("reports") / "codemix.jsonl", lines);
  const json summary(counts);
  ctx.write_json(ctx.dir("reports") / "codemix-summary.json", summary);
  for (const auto& [type, n] : counts) ctx.out << type << '\t' << n << '\n';
}

void cmd_agreement(Context& ctx, const Options& o) {
  const auto records =
      agreement::load_annotations(ctx.input("--annotations", o.annotations, {}),
                                  label_map(o.label_map));
  std::vector<agreement::AnnotatorInfo> roster;
  if (!o.roster.empty()) roster = agreement::load_roster(ctx.input("--roster", o.roster, {}));
  const auto alpha = agreement::alpha_details(records);
  const auto summary = agreement::annotator_summary(records, roster);
  for (const auto& w : summary.warnings) ctx.warn(w);
  const json j = {{"alpha", alpha.alpha},
                  {"observed_disagreement", alpha.observed_disagreement},
                  {"expected_disagreement", alpha.expected_disagreement},
                  {"coincidence", alpha.matrix.to_json()},
                  {"annotators", summary.to_json()}};
  ctx.write_json(ctx.dir("reports") / "agreement.json", j);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", alpha.alpha);
  ctx.out << "krippendorff alpha (nominal): " << buf << '\n';
}

void cmd_split(Context& ctx, const Options& o) {
  auto d = load_all(ctx.inputs("--in", o.in), label_map(o.label_map));
  const std::size_t raw = d.size();
  if (!o.keep_not_kannada) {
    const std::array keep = {corpus::Label::Hope, corpus::Label::NotHope};
    d = corpus::filter_labels(d, keep);
  }
  if (o.fractions.size() != 3) throw ValidationError("--fractions needs train,dev,test");
  corpus::SplitSpec spec{o.fractions[0], o.fractions[1], o.fractions[2],
                         derive_seed(ctx.seed, "corpus/split"), o.stratified};
  const auto parts = corpus::split(d, spec);
  const auto dir = ctx.dir("splits");
  ctx.write(dir / "train.csv", corpus::serialize_dataset(parts.train));
  ctx.write(dir / "dev.csv", corpus::serialize_dataset(parts.dev));
  ctx.write(dir / "test.csv", corpus::serialize_dataset(parts.test));
  ctx.out << "loaded " << raw << ", kept " << d.size() << '\n';
  for (const auto& [name, part] : {std::pair{"train", &parts.train}, std::pair{"dev", &parts.dev},
                                    std::pair{"test", &parts.test}}) {
    ctx.out << name << '\t' << part->size() << "\tHope " << part->count(corpus::Label::Hope)
            << "\tNot-Hope " << part->count(corpus::Label::NotHope);
    if (o.keep_not_kannada) ctx.out << "\tNot-Kannada " << part->count(corpus::Label::NotKannada);
    ctx.out << '\n';
  }
}

void cmd_featurize(Context& ctx, const Options& o) {
  const auto train = binary_only(
      corpus::load_dataset(ctx.input("--train", o.train, "splits/train.csv"), label_map(o.label_map)),
      ctx);
  if (o.ngram_range.size() != 2) throw ValidationError("--ngram-range needs min,max");
  const features::NgramRange range{o.ngram_range[0], o.ngram_range[1]};
  const auto docs = token_docs(train, o.clean);
  const auto model =
      features::fit_tfidf(docs, range, o.min_df, features::parse_analyzer(o.analyzer));
  json j = model.to_json();
  j["clean"] = o.clean;
  ctx.write_json(ctx.dir("models") / "tfidf.json", j);
  ctx.out << "vocabulary " << model.dimension() << " terms from " << model.num_docs()
          << " documents\n";
}

std::vector<std::uint64_t> seeds_of(const Context& ctx, const Options& o) {
  return o.seeds.empty() ? std::vector<std::uint64_t>{ctx.seed} : o.seeds;
}

void cmd_train_classical(Context& ctx, const Options& o, const std::string& kind) {
  const auto features = load_features(ctx.input("--features", o.features, "models/tfidf.json"));
  const auto train = binary_only(
      corpus::load_dataset(ctx.input("--train", o.train, "splits/train.csv"), label_map(o.label_map)),
      ctx);
  const auto X = features::transform_all(features.model, token_docs(train, features.clean));
  const auto y = class_labels(train);

  for (const auto seed : seeds_of(ctx, o)) {
    classifiers::AnyModel model;
    if (kind == "lr") {
      auto m = classifiers::fit_logreg(X, y, o.logreg);
      if (m.gradient_norm > o.logreg.tolerance) {
        ctx.warn("logistic regression stopped at max iterations with gradient norm " +
                 std::to_string(m.gradient_norm));
      }
      model = std::move(m);
    } else if (kind == "nb") {
      model = classifiers::fit_nb(X, y, o.nb_alpha);
    } else if (kind == "knn") {
      model = classifiers::fit_knn(X, y, o.knn_k, o.knn_p);
    } else if (kind == "tree") {
      model = classifiers::fit_tree(X, y, o.tree);
    } else {
      auto config = o.forest;
      config.seed = derive_seed(seed, "classifiers/forest");
      if (o.max_features == "sqrt") {
        config.max_features = classifiers::MaxFeatures::Sqrt;
      } else if (o.max_features == "all") {
        config.max_features = classifiers::MaxFeatures::All;
      } else {
        throw ValidationError("--max-features must be sqrt or all");
      }
      model = classifiers::fit_forest(X, y, config);
    }
    json j = classifiers::to_json(model);
    j["seed"] = seed;
    const auto path = ctx.dir("models") / (kind + "-s" + std::to_string(seed) + ".json");
    ctx.write(path, j.dump() + "\n");
    ctx.out << "trained " << classifiers::model_kind(model) << " (seed " << seed << ") -> "
            << path.string() << '\n';
  }
}

dc::Fusion parse_fusion(const std::string& s) {
  if (s == "scalar") return dc::Fusion::Scalar;
  if (s == "vector") return dc::Fusion::PerDimension;
  throw ValidationError("--fusion must be scalar or vector");
}

void cmd_train_dc(Context& ctx, const Options& o) {
  const auto label_spec = label_map(o.label_map);
  const auto train = binary_only(
      corpus::load_dataset(ctx.input("--train", o.train, "splits/train.csv"), label_spec), ctx);
  const auto dev_path = o.dev.empty() ? ctx.out_dir / "splits/dev.csv" : fs::path(o.dev);
  std::optional<corpus::Dataset> dev;
  if (fs::exists(dev_path)) {
    dev = binary_only(corpus::load_dataset(ctx.input("--dev", dev_path.string(), {}), label_spec),
                      ctx);
  } else if (!o.dev.empty()) {
    throw ValidationError("--dev: no such file " + o.dev);
  } else {
    ctx.warn("no dev split; keeping the last epoch");
  }

  TranslationOptions translation = o.translation;
  if (!translation.cache.empty()) {
    translation.cache = fs::absolute(translation.cache).lexically_normal().string();
    ctx.pin("--translations", {translation.cache});
  }
  auto provider = translation.provider();
  const dc::TokenizerHash tokenizer{o.vocab, o.max_length};
  tokenizer.validate();
  const auto train_data = channel_examples(train, tokenizer, provider, o.clean, o.channels);
  report_translation(ctx, provider, train_data, "training");
  ChannelData dev_data;
  if (dev) {
    dev_data = channel_examples(*dev, tokenizer, provider, o.clean, o.channels);
    report_translation(ctx, provider, dev_data, "dev");
  }
  provider.save();

  const dc::ModelConfig config{o.vocab, o.dim, o.channels, parse_fusion(o.fusion)};
  for (const auto seed : seeds_of(ctx, o)) {
    auto train_config = o.dc_train;
    train_config.seed = derive_seed(seed, "dualchannel/train");
    auto model = dc::init_model(config, derive_seed(seed, "dualchannel/init"));
    if (train_config.freeze_second_fusion && model.fusion.size() > 1) model.fusion[1].setZero();
    const auto result = dc::train(std::move(model), train_data.examples, dev_data.examples,
                                  train_config);

    const std::string stem = "dc-s" + std::to_string(seed);
    const auto models = ctx.dir("models");
    dc::save_model(result.model, tokenizer, models / (stem + ".bin"));
    ctx.record(models / (stem + ".bin"), read_text(models / (stem + ".bin")));
    const json sidecar = {{"model_kind", "dual_channel"},
                          {"version", 1},
                          {"seed", seed},
                          {"weights", stem + ".bin"},
                          {"clean", o.clean},
                          {"translation", translation.to_json()},
                          {"best_epoch", result.best_epoch}};
    ctx.write_json(models / (stem + ".json"), sidecar);
    ctx.write(ctx.dir("reports") / (stem + "-history.csv"), dc::history_csv(result.history));
    ctx.out << "trained dual_channel (seed " << seed << "), best epoch " << result.best_epoch
            << " -> " << (models / (stem + ".json")).string() << '\n';
  }
}

metrics::EvalReport eval_one(Context& ctx, const Options& o, const fs::path& model_path,
                             const corpus::LabelMap& labels, const fs::path& test_path) {
  const json j = read_json(model_path);
  const auto seed = j.value("seed", std::uint64_t{0});
  const auto test = binary_only(corpus::load_dataset(test_path, labels), ctx);
  const auto truth = class_labels(test);
  std::vector<int> predicted;
  std::string kind = j.value("model_kind", "");
  if (kind == "dual_channel") {
    const auto loaded = dc::load_model(model_path.parent_path() / j.at("weights").get<std::string>());
    auto provider = TranslationOptions::from_json(j.at("translation")).provider();
    const auto data = channel_examples(test, loaded.tokenizer, provider, j.value("clean", true),
                                       loaded.model.config.channels);
    report_translation(ctx, provider, data, "test");
    predicted = dc::predict(loaded.model, data.examples);
  } else {
    const auto features = load_features(ctx.input("--features", o.features, "models/tfidf.json"));
    const auto model = classifiers::from_json(j);
    kind = std::string(classifiers::model_kind(model));
    const auto X = features::transform_all(features.model, token_docs(test, features.clean));
    predicted = classifiers::predict(model, X);
  }
  const auto cm = metrics::confusion(truth, predicted, corpus::kClassNames);
  return metrics::evaluate(o.name.empty() ? display_name(kind) : o.name, seed, cm);
}

void cmd_eval(Context& ctx, const Options& o) {
  const auto labels = label_map(o.label_map);
  const auto test_path = ctx.input("--test", o.test, "splits/test.csv");
  const auto model_paths = ctx.inputs("--model", o.models);
  if (model_paths.empty()) throw ValidationError("eval: give at least one --model");
  std::vector<metrics::EvalReport> runs;
  for (const auto& p : model_paths) runs.push_back(eval_one(ctx, o, p, labels, test_path));
  auto report = metrics::mean_report(runs);
  report.timestamp = timestamp_now();
  ctx.write_json(ctx.dir("reports") / ("eval-" + slug(report.model) + ".json"), report.to_json());
  const std::array one = {report};
  ctx.out << metrics::render_table(one);
}

void cmd_report(Context& ctx, const Options& o) {
  std::vector<fs::path> paths = ctx.inputs("--in", o.in);
  if (paths.empty()) {
    const auto dir = ctx.out_dir / "reports";
    if (fs::exists(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("eval-", 0) == 0 && entry.path().extension() == ".json") {
          paths.push_back(entry.path());
        }
      }
    }
    std::sort(paths.begin(), paths.end());
  }
  if (paths.empty()) throw ValidationError("report: no evaluation reports found");
  std::vector<metrics::EvalReport> reports;
  json all = json::array();
  for (const auto& p : paths) {
    reports.push_back(metrics::EvalReport::from_json(read_json(p)));
    all.push_back(reports.back().to_json());
  }
  const std::string table = metrics::render_table(reports);
  ctx.write(ctx.dir("reports") / "table.txt", table);
  ctx.write_json(ctx.dir("reports") / "summary.json", all);
  ctx.out << table;
}

void cmd_gradcheck(Context& ctx, const Options& o) {
  if (o.gc_models < 1 || o.gc_batch < 1) throw ValidationError("gradcheck: need models and batch >= 1");
  const dc::ModelConfig config{o.vocab, o.dim, o.channels, parse_fusion(o.fusion)};
  double worst = 0.0;
  std::string worst_group;
  std::size_t checked = 0;
  for (int i = 0; i < o.gc_models; ++i) {
    const auto seed = derive_seed(ctx.seed, "gradcheck/" + std::to_string(i));
    const auto model = dc::random_model(config, seed);
    Rng rng(derive_seed(seed, "batch"));
    std::vector<dc::Example> batch(o.gc_batch);
    for (auto& x : batch) {
      x.label = static_cast<int>(rng.below(2));
      x.channels.resize(config.channels);
      for (auto& ids : x.channels) {
        ids.resize(1 + rng.below(5));
        for (auto& id : ids) id = static_cast<std::uint32_t>(rng.below(config.vocab_size));
      }
    }
    const auto r = dc::grad_check(model, batch);
    checked += r.checked;
    if (r.max_relative_error >= worst) {
      worst = r.max_relative_error;
      worst_group = r.worst_group;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "max relative error %.3e (%s) over %d models, %zu parameters\n",
                worst, worst_group.c_str(), o.gc_models, checked);
  ctx.out << buf;
  const json j = {{"max_relative_error", worst}, {"worst_group", worst_group},
                  {"models", o.gc_models}, {"checked", checked}};
  ctx.write_json(ctx.dir("reports") / "gradcheck.json", j);
  if (!(worst < 1e-4)) throw RuntimeFailure("gradient check failed");
}

}  // namespace

namespace {

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_replay(const Options& o, const std::string& out_override, std::ostream& out,
               std::ostream& err) {
  const json m = read_json(o.manifest);
  if (m.value("tool", "") != "hopebench" || m.value("format", 0) != kManifestFormat) {
    throw ValidationError(o.manifest + " is not a hopebench manifest");
  }
  if (m.at("command").get<std::string>() == "replay") throw ValidationError("cannot replay a replay");
  const fs::path target = out_override.empty()
                              ? fs::path(o.manifest).parent_path().parent_path()
                              : fs::path(out_override);
  std::vector<std::string> args = {"--seed", std::to_string(m.at("seed").get<std::uint64_t>()),
                                   "--out", target.string()};
  for (const auto& a : m.at("argv")) args.push_back(a.get<std::string>());
  const int status = run_impl(args, out, err);
  if (status != kOk) return status;

  std::size_t differ = 0;
  for (const auto& [rel, expected] : m.at("outputs").items()) {
    const fs::path p = target / rel;
    const std::string actual = fs::exists(p) ? digest(read_text(p)) : "missing";
    if (actual != expected.get<std::string>()) {
      err << "replay: " << rel << " differs (" << actual << " vs " << expected.get<std::string>()
          << ")\n";
      ++differ;
    }
  }
  if (differ > 0) {
    err << "replay: " << differ << " of " << m.at("outputs").size() << " outputs differ\n";
    return kRuntimeFailure;
  }
  out << "replay: all " << m.at("outputs").size() << " outputs identical\n";
  return kOk;
}

int run_impl(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  Context ctx(out, err);
  std::string out_dir = "out";

  CLI::App app{"Hope speech detection on code-mixed Kannada: corpus tools, classical baselines "
               "and a dual-channel classifier.",
               "hopebench"};
  app.set_config("--config", "", "Flat key=value file; [subcommand] sections or dotted keys")
      ->envname("HOPEBENCH_CONFIG");
  app.add_option("--seed", ctx.seed, "Base seed for every random component")
      ->envname("HOPEBENCH_SEED")
      ->capture_default_str();
  auto* out_opt = app.add_option("--out", out_dir, "Artifact directory")
                      ->envname("HOPEBENCH_OUT")
                      ->capture_default_str();
  app.require_subcommand(1, 1);
  // Global options may also follow the subcommand.
  app.fallthrough();
  app.footer(
      "Precedence: command-line flags, then the --config file, then HOPEBENCH_* environment "
      "variables, then built-in defaults.\nExit status: 0 ok, 1 invalid input, 2 runtime failure.");

  auto add_label_map = [&](CLI::App* sub) {
    sub->add_option("--label-map", o.label_map,
                    "Extra label spellings, e.g. 'hope=Hope,not-hope=NotHope'");
  };
  auto add_clean = [&](CLI::App* sub) {
    sub->add_flag("--clean,!--no-clean", o.clean, "Apply text cleaning before tokenizing")
        ->capture_default_str();
  };

  auto* stats = app.add_subcommand("stats", "Corpus statistics (posts, tokens, vocabulary, sentences)");
  stats->add_option("--in", o.in, "Dataset CSV (repeat to combine)")->required();
  stats->add_flag("--drop-not-kannada", o.drop_not_kannada, "Count only Hope and Not-Hope rows");
  add_label_map(stats);

  auto* clean = app.add_subcommand("clean", "Normalize text: URLs, emoji names, punctuation");
  clean->add_option("--in", o.in, "Dataset CSV");
  clean->add_option("--text", o.text, "Clean one string and print it");
  clean->add_option("--output", o.output, "Output CSV (default splits/<name>.clean.csv)");
  clean->add_option("--emoji-table", o.emoji_table, "TSV of code points and names");
  add_label_map(clean);

  auto* codemix = app.add_subcommand("codemix", "Script tags and code-mixing type per comment");
  codemix->add_option("--in", o.in, "Dataset CSV");
  codemix->add_option("--text", o.text, "Classify one string and print its profile");
  codemix->add_option("--lexicon", o.lexicon, "English word list, one per line");
  codemix->add_option("--neutral", o.neutral, "Language-neutral tokens, one per line");
  codemix->add_option("--english-low", o.english_low, "Below this English share: romanized Kannada")
      ->capture_default_str();
  codemix->add_option("--english-high", o.english_high, "Above this English share: English")
      ->capture_default_str();
  add_label_map(codemix);

  auto* agree = app.add_subcommand("agreement", "Krippendorff's alpha and annotator summary");
  agree->add_option("--annotations", o.annotations, "CSV unit_id,annotator_id,label")->required();
  agree->add_option("--roster", o.roster,
                    "CSV annotator_id,gender,higher_education,medium_of_schooling");
  add_label_map(agree);

  auto* split = app.add_subcommand("split", "Filter Not-Kannada and split train/dev/test");
  split->add_option("--in", o.in, "Dataset CSV (repeat to combine)")->required();
  split->add_option("--fractions", o.fractions, "train,dev,test")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  split->add_flag("--stratified,!--no-stratified", o.stratified, "Keep class proportions")
      ->capture_default_str();
  split->add_flag("--keep-not-kannada", o.keep_not_kannada, "Split all three labels");
  add_label_map(split);

  auto* featurize = app.add_subcommand("featurize", "Fit TF-IDF n-gram features");
  featurize->add_option("--train", o.train, "Training CSV (default splits/train.csv)");
  featurize->add_option("--analyzer", o.analyzer, "word or char")->capture_default_str();
  featurize->add_option("--ngram-range", o.ngram_range, "min,max")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  featurize->add_option("--min-df", o.min_df, "Minimum document frequency")->capture_default_str();
  add_clean(featurize);
  add_label_map(featurize);

  auto* train = app.add_subcommand("train", "Train a classifier");
  train->require_subcommand(1, 1);
  train->fallthrough();
  auto add_train_common = [&](CLI::App* sub, bool tfidf) {
    sub->add_option("--train", o.train, "Training CSV (default splits/train.csv)");
    if (tfidf) sub->add_option("--features", o.features, "TF-IDF model (default models/tfidf.json)");
    sub->add_option("--seeds", o.seeds, "Seeds to train with (default --seed)")->delimiter(',');
    add_label_map(sub);
  };
  auto* lr = train->add_subcommand("lr", "L2 logistic regression");
  add_train_common(lr, true);
  lr->add_option("--C", o.logreg.C, "Inverse regularization strength")->capture_default_str();
  lr->add_option("--tolerance", o.logreg.tolerance, "Gradient-norm stopping tolerance")
      ->capture_default_str();
  lr->add_option("--max-iter", o.logreg.max_iterations)->capture_default_str();
  auto* nb = train->add_subcommand("nb", "Multinomial naive Bayes");
  add_train_common(nb, true);
  nb->add_option("--alpha", o.nb_alpha, "Additive smoothing")->capture_default_str();
  auto* knn = train->add_subcommand("knn", "k nearest neighbours");
  add_train_common(knn, true);
  knn->add_option("--k", o.knn_k)->capture_default_str();
  knn->add_option("--p", o.knn_p, "Minkowski power")->capture_default_str();
  auto* tree = train->add_subcommand("tree", "CART decision tree (Gini)");
  add_train_common(tree, true);
  tree->add_option("--max-depth", o.tree.max_depth)->capture_default_str();
  tree->add_option("--min-samples-split", o.tree.min_samples_split)->capture_default_str();
  auto* forest = train->add_subcommand("forest", "Random forest");
  add_train_common(forest, true);
  forest->add_option("--trees", o.forest.n_trees)->capture_default_str();
  forest->add_option("--max-depth", o.forest.max_depth)->capture_default_str();
  forest->add_option("--min-samples-split", o.forest.min_samples_split)->capture_default_str();
  forest->add_option("--max-features", o.max_features, "sqrt or all")->capture_default_str();
  forest->add_flag("--bootstrap,!--no-bootstrap", o.forest.bootstrap)->capture_default_str();
  auto* dct = train->add_subcommand("dc", "Dual-channel classifier");
  add_train_common(dct, false);
  add_clean(dct);
  dct->add_option("--dev", o.dev, "Dev CSV for model selection (default splits/dev.csv)");
  dct->add_option("--translations", o.translation.cache, "Translation cache TSV");
  dct->add_option("--translate-url", o.translation.url, "HTTP translation endpoint")
      ->envname("HOPEBENCH_TRANSLATE_URL");
  dct->add_option("--dim", o.dim)->capture_default_str();
  dct->add_option("--vocab", o.vocab, "Hashed vocabulary size (power of two)")->capture_default_str();
  dct->add_option("--max-length", o.max_length)->capture_default_str();
  dct->add_option("--channels", o.channels, "1 or 2")->capture_default_str();
  dct->add_option("--fusion", o.fusion, "scalar or vector")->capture_default_str();
  dct->add_option("--epochs", o.dc_train.epochs)->capture_default_str();
  dct->add_option("--batch-size", o.dc_train.batch_size)->capture_default_str();
  dct->add_option("--lr", o.dc_train.learning_rate)->capture_default_str();
  dct->add_option("--weight-decay", o.dc_train.weight_decay)->capture_default_str();
  dct->add_option("--dropout", o.dc_train.dropout)->capture_default_str();
  dct->add_flag("--freeze-second-fusion", o.dc_train.freeze_second_fusion,
                "Fix the translated channel's fusion weight at 0");

  auto* eval = app.add_subcommand("eval", "Evaluate models on the test split");
  eval->add_option("--model", o.models, "Model file (repeat for seeds; metrics are averaged)")
      ->required();
  eval->add_option("--test", o.test, "Test CSV (default splits/test.csv)");
  eval->add_option("--features", o.features, "TF-IDF model (default models/tfidf.json)");
  eval->add_option("--name", o.name, "Row name in the report");
  add_label_map(eval);

  auto* report = app.add_subcommand("report", "Combine evaluation reports into one table");
  report->add_option("--in", o.in, "Report JSON (default reports/eval-*.json)");

  auto* gradcheck = app.add_subcommand("gradcheck", "Check dual-channel gradients numerically");
  gradcheck->add_option("--dim", o.dim)->default_str("4");
  gradcheck->add_option("--vocab", o.vocab)->default_str("8");
  gradcheck->add_option("--channels", o.channels)->capture_default_str();
  gradcheck->add_option("--fusion", o.fusion)->capture_default_str();
  gradcheck->add_option("--models", o.gc_models)->capture_default_str();
  gradcheck->add_option("--batch", o.gc_batch)->capture_default_str();

  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare outputs");
  replay->add_option("--manifest", o.manifest)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidationError;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidationError;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto* failing = app.get_subcommands().empty() ? &app : app.get_subcommands().back();
    err << failing->help();
    return kValidationError;
  }
  if (gradcheck->parsed()) {
    if (gradcheck->get_option("--dim")->count() == 0) o.dim = 4;
    if (gradcheck->get_option("--vocab")->count() == 0) o.vocab = 8;
  }

  if (replay->parsed()) {
    return cmd_replay(o, out_opt->count() > 0 ? out_dir : "", out, err);
  }

  ctx.out_dir = out_dir;
  const CLI::App* level = &app;
  while (!level->get_subcommands().empty()) {
    level = level->get_subcommands().front();
    ctx.levels.push_back(capture(*level));
    ctx.command += (ctx.command.empty() ? "" : " ") + level->get_name();
  }

  if (stats->parsed()) cmd_stats(ctx, o);
  else if (clean->parsed()) cmd_clean(ctx, o);
  else if (codemix->parsed()) cmd_codemix(ctx, o);
  else if (agree->parsed()) cmd_agreement(ctx, o);
  else if (split->parsed()) cmd_split(ctx, o);
  else if (featurize->parsed()) cmd_featurize(ctx, o);
  else if (lr->parsed()) cmd_train_classical(ctx, o, "lr");
  else if (nb->parsed()) cmd_train_classical(ctx, o, "nb");
  else if (knn->parsed()) cmd_train_classical(ctx, o, "knn");
  else if (tree->parsed()) cmd_train_classical(ctx, o, "tree");
  else if (forest->parsed()) cmd_train_classical(ctx, o, "forest");
  else if (dct->parsed()) cmd_train_dc(ctx, o);
  else if (eval->parsed()) cmd_eval(ctx, o);
  else if (report->parsed()) cmd_report(ctx, o);
  else if (gradcheck->parsed()) cmd_gradcheck(ctx, o);

  ctx.write_manifest();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

}  // namespace hopebench::cli
