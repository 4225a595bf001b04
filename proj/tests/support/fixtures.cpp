#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "hopebench/cli.hpp"
#include "hopebench/features.hpp"
#include "hopebench/random.hpp"
#include "oracles.hpp"

namespace hopebench::testing {

namespace fs = std::filesystem;

const std::vector<std::string> kTypologyFixtures = {
    "ತುಂಬಾ ವರ್ಷದ ಹಿಂದೆ ಕೇಳಿದೆ. ಈಗ ಸಿಕ್ಕಿತ್ತು ದು ಸಕತ್ ಖುಷಿ ಆ",
    "Sister ಹಾಗೆಲಲ್ ಮಾಡಲಲ್ ನಾವು ಯಾರಾದರೂ ತಪ್ಪು ಮಾಡ್ತಿದ್ದೇ ಅಂದಾಗ ಅವರನ್ roast ಮಾಡ್ತಿದ್ದೇ ಅಷ್ಟೇ. ಅದು "
    "entertainment ಗೆ ಅಷ್ಟೇ. ತುಂಬಾ ನಯದಗಳು ಹೀಗೆ support ಮಾಡ್ತೇರಿ",
    "Namma deshanu china thara aitu andre badatanane erala sir",
    "ಈ ದರಿದ್ರ ಬಡತನದ ತವ tiktok ನೋಡಿಯವರು ಬಾಯ್ ಮಾಡಿದ ಗುರು",
    "Estella matadonu elli matadodkintta border ge hogi matado maraya",
    "ನಿಜವಾಗಿಯೂ ಅದುತ್ತ hartly heltidini... plz avrigella namma nimmellara support beku",
};

std::vector<dualchannel::Example> separable_set(std::uint64_t seed, std::size_t vocab_size,
                                                std::size_t channels) {
  Rng rng(seed);
  const std::size_t half = vocab_size / 2;
  std::vector<dualchannel::Example> out;
  for (int i = 0; i < 64; ++i) {
    dualchannel::Example x;
    x.label = i % 2;
    x.channels.resize(channels);
    for (auto& ids : x.channels) {
      ids.resize(3 + rng.below(6));
      for (auto& id : ids) {
        id = static_cast<std::uint32_t>(x.label * half + rng.below(half));
      }
    }
    out.push_back(std::move(x));
  }
  return out;
}

corpus::Dataset synthetic_corpus(std::size_t not_hope, std::size_t hope, std::size_t not_kannada,
                                 std::uint64_t seed) {
  static const std::vector<std::string> shared = {"ನಮ್ಮ", "video", "guru", "ಈ", "sir", "super"};
  static const std::vector<std::string> hopeful = {"ಶುಭಾಶಯಗಳು", "best", "wishes", "support",
                                                   "ಒಳ್ಳೆಯದಾಗಲಿ", "proud", "together"};
  static const std::vector<std::string> hopeless = {"ದರಿದ್ರ", "waste", "worst", "ಬಡತನ",
                                                    "fake", "shame", "ಕೆಟ್ಟ"};
  static const std::vector<std::string> other = {"ennada", "ithu", "romba", "nalla", "padam"};

  Rng rng(seed);
  auto sentence = [&](const std::vector<std::string>& pool) {
    std::string text;
    const std::size_t words = 2 + rng.below(8);
    for (std::size_t w = 0; w < words; ++w) {
      if (!text.empty()) text += ' ';
      text += rng.below(3) == 0 ? shared[rng.below(shared.size())] : pool[rng.below(pool.size())];
    }
    return text;
  };

  std::vector<corpus::Comment> comments;
  auto add = [&](std::size_t count, corpus::Label label, const std::vector<std::string>& pool) {
    for (std::size_t i = 0; i < count; ++i) {
      corpus::Comment c;
      c.label = label;
      c.text = sentence(pool);
      if (rng.below(4) == 0) c.text += ". " + sentence(pool);
      comments.push_back(std::move(c));
    }
  };
  add(not_hope, corpus::Label::NotHope, hopeless);
  add(hope, corpus::Label::Hope, hopeful);
  add(not_kannada, corpus::Label::NotKannada, other);
  rng.shuffle(std::span<corpus::Comment>(comments));
  for (std::size_t i = 0; i < comments.size(); ++i) comments[i].id = static_cast<std::int64_t>(i);
  return corpus::Dataset("synthetic", std::move(comments));
}

std::vector<agreement::AnnotationRecord> records_from_table(
    const std::vector<std::vector<int>>& table) {
  std::vector<agreement::AnnotationRecord> records;
  for (std::size_t u = 0; u < table.size(); ++u) {
    for (std::size_t a = 0; a < table[u].size(); ++a) {
      if (table[u][a] < 0) continue;
      records.push_back({"u" + std::to_string(u), "a" + std::to_string(a),
                         corpus::kAllLabels[static_cast<std::size_t>(table[u][a])]});
    }
  }
  return records;
}

std::optional<std::string> tfidf_mismatch(const std::vector<std::vector<std::string>>& docs,
                                          int n_min, int n_max, std::size_t min_df,
                                          double tolerance) {
  const auto naive = naive_tfidf(docs, n_min, n_max, min_df);
  if (naive.doc_freq.empty()) {
    try {
      features::fit_tfidf(docs, {n_min, n_max}, min_df);
    } catch (const features::EmptyVocabularyError&) {
      return std::nullopt;
    }
    return "expected an empty-vocabulary error";
  }
  const auto model = features::fit_tfidf(docs, {n_min, n_max}, min_df);
  if (model.dimension() != naive.doc_freq.size()) return "vocabulary size differs";
  std::size_t j = 0;
  for (const auto& [term, df] : naive.doc_freq) {
    if (model.terms()[j] != term) return "term " + std::to_string(j) + " is '" + model.terms()[j] + "', expected '" + term + "'";
    if (model.doc_freq()[j] != df) return "df of '" + term + "' differs";
    ++j;
  }
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto v = features::transform(model, docs[d]);
    const auto& expected = naive.rows[d];
    if (v.size() != expected.size()) return "doc " + std::to_string(d) + ": support differs";
    double sq = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k > 0 && v.indices[k] <= v.indices[k - 1]) return "indices not increasing";
      const auto& term = model.terms()[v.indices[k]];
      auto it = expected.find(term);
      if (it == expected.end()) return "doc " + std::to_string(d) + ": unexpected term " + term;
      if (std::abs(it->second - v.values[k]) > tolerance) {
        return "doc " + std::to_string(d) + ": weight of '" + term + "' differs";
      }
      sq += v.values[k] * v.values[k];
    }
    if (!v.empty() && std::abs(std::sqrt(sq) - 1.0) > 1e-9) return "norm is not 1";
  }
  return std::nullopt;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto base = fs::temp_directory_path() / "hopebench-tests";
  fs::create_directories(base);
  for (;;) {
    auto candidate = base / (tag + "-" + std::to_string(::getpid()) + "-" +
                             std::to_string(counter.fetch_add(1)));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.status = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace hopebench::testing
