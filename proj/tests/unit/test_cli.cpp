#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "fixtures.hpp"
#include "hopebench/cli.hpp"
#include "hopebench/corpus.hpp"

using namespace hopebench;
using hopebench::testing::run_cli;
using hopebench::testing::TempDir;
namespace fs = std::filesystem;

namespace {

// A small corpus with all three labels on disk.
fs::path write_corpus(const TempDir& dir) {
  const auto path = dir / "corpus.csv";
  testing::write_file(path, corpus::serialize_dataset(testing::synthetic_corpus(60, 40, 20, 1)));
  return path;
}

std::vector<std::string> with_out(const TempDir& dir, std::vector<std::string> args) {
  args.insert(args.begin(), {"--out", (dir / "out").string()});
  return args;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1") {
  auto r = run_cli({"frobnicate"});
  CHECK(r.status == cli::kValidationError);
  CHECK(r.err.find("error:") != std::string::npos);

  r = run_cli({});
  CHECK(r.status == cli::kValidationError);

  r = run_cli({"split", "--bogus"});
  CHECK(r.status == cli::kValidationError);
  CHECK(r.err.find("--fractions") != std::string::npos);  // subcommand usage follows

  r = run_cli({"--help"});
  CHECK(r.status == cli::kOk);
  CHECK(r.out.find("split") != std::string::npos);
  CHECK(r.out.find("Precedence") != std::string::npos);
}

TEST_CASE("missing input files exit 1") {
  TempDir dir("cli");
  auto r = run_cli(with_out(dir, {"split", "--in", (dir / "nope.csv").string()}));
  CHECK(r.status == cli::kValidationError);
  r = run_cli(with_out(dir, {"featurize"}));
  CHECK(r.status == cli::kValidationError);
  CHECK(r.err.find("splits/train.csv") != std::string::npos);
}

TEST_CASE("clean and codemix on single strings") {
  auto r = run_cli({"clean", "--text", "Best wishes 😊 https://t.co/x"});
  CHECK(r.status == 0);
  CHECK(r.out == "Best wishes smiling face URL\n");
  r = run_cli({"codemix", "--text", "ಸೂಪರ್ movie"});
  CHECK(r.status == 0);
  CHECK(nlohmann::json::parse(r.out).at("mix_type") == "Type4");
  r = run_cli({"codemix", "--text", "x", "--english-low", "0.9", "--english-high", "0.5"});
  CHECK(r.status == cli::kValidationError);
}

TEST_CASE("split, featurize, train, eval, report") {
  TempDir dir("cli");
  const auto corpus_path = write_corpus(dir);
  auto r = run_cli(with_out(dir, {"split", "--in", corpus_path.string()}));
  REQUIRE(r.status == 0);
  CHECK(r.out.find("loaded 120, kept 100") != std::string::npos);
  const auto train = corpus::load_dataset(dir / "out/splits/train.csv");
  const auto dev = corpus::load_dataset(dir / "out/splits/dev.csv");
  const auto test = corpus::load_dataset(dir / "out/splits/test.csv");
  CHECK(train.size() == 80);
  CHECK(dev.size() == 10);
  CHECK(test.size() == 10);
  CHECK(train.count(corpus::Label::NotKannada) == 0);

  r = run_cli(with_out(dir, {"featurize", "--ngram-range", "1,2"}));
  REQUIRE(r.status == 0);
  CHECK(fs::exists(dir / "out/models/tfidf.json"));

  r = run_cli(with_out(dir, {"train", "lr", "--C", "0.1", "--seeds", "0,1"}));
  REQUIRE(r.status == 0);
  CHECK(fs::exists(dir / "out/models/lr-s0.json"));
  CHECK(fs::exists(dir / "out/models/lr-s1.json"));
  r = run_cli(with_out(dir, {"train", "nb"}));
  REQUIRE(r.status == 0);

  r = run_cli(with_out(dir, {"eval", "--model", (dir / "out/models/lr-s0.json").string(),
                             "--model", (dir / "out/models/lr-s1.json").string()}));
  REQUIRE(r.status == 0);
  CHECK(r.out.find("Logistic Regression") != std::string::npos);
  const auto report = nlohmann::json::parse(
      testing::read_file(dir / "out/reports/eval-logistic-regression.json"));
  CHECK(report.at("seeds").size() == 2);

  r = run_cli(with_out(dir, {"eval", "--model", (dir / "out/models/nb-s0.json").string()}));
  REQUIRE(r.status == 0);
  r = run_cli(with_out(dir, {"report"}));
  REQUIRE(r.status == 0);
  CHECK(r.out.find("Naive Bayes") != std::string::npos);
  CHECK(r.out.find("Logistic Regression") != std::string::npos);
  CHECK(fs::exists(dir / "out/reports/table.txt"));
}

TEST_CASE("dual-channel training through the command line") {
  TempDir dir("cli");
  const auto corpus_path = write_corpus(dir);
  REQUIRE(run_cli(with_out(dir, {"split", "--in", corpus_path.string()})).status == 0);
  auto r = run_cli(with_out(dir, {"train", "dc", "--dim", "8", "--vocab", "256", "--epochs", "3"}));
  REQUIRE(r.status == 0);
  // No translations: the second channel falls back to the source text.
  CHECK(r.err.find("no translation") != std::string::npos);
  CHECK(fs::exists(dir / "out/models/dc-s0.bin"));
  CHECK(testing::read_file(dir / "out/reports/dc-s0-history.csv").rfind("epoch,", 0) == 0);
  r = run_cli(with_out(dir, {"eval", "--model", (dir / "out/models/dc-s0.json").string()}));
  REQUIRE(r.status == 0);
  CHECK(r.out.find("Dual-Channel") != std::string::npos);

  r = run_cli(with_out(dir, {"train", "dc", "--vocab", "100"}));
  CHECK(r.status == cli::kValidationError);
}

TEST_CASE("gradcheck") {
  TempDir dir("cli");
  auto r = run_cli(with_out(dir, {"gradcheck", "--dim", "4", "--vocab", "8", "--models", "2"}));
  CHECK(r.status == 0);
  CHECK(r.out.find("max relative error") != std::string::npos);
  const auto j = nlohmann::json::parse(testing::read_file(dir / "out/reports/gradcheck.json"));
  CHECK(j.at("max_relative_error").get<double>() < 1e-4);
}

TEST_CASE("replay reproduces split and training outputs") {
  TempDir dir("cli");
  const auto corpus_path = write_corpus(dir);
  REQUIRE(run_cli(with_out(dir, {"--seed", "7", "split", "--in", corpus_path.string()})).status == 0);
  REQUIRE(run_cli(with_out(dir, {"featurize"})).status == 0);
  REQUIRE(run_cli(with_out(dir, {"train", "forest", "--trees", "5"})).status == 0);
  const auto manifests = dir / "out/manifests";
  CHECK(fs::exists(manifests / "split.json"));
  CHECK(fs::exists(manifests / "train-forest.json"));

  const auto before = testing::read_file(dir / "out/models/forest-s0.json");
  auto r = run_cli({"replay", "--manifest", (manifests / "train-forest.json").string()});
  CHECK(r.status == 0);
  CHECK(r.out.find("outputs identical") != std::string::npos);
  CHECK(testing::read_file(dir / "out/models/forest-s0.json") == before);

  // Replaying into a fresh directory reproduces the split byte for byte.
  const auto split_before = testing::read_file(dir / "out/splits/train.csv");
  r = run_cli({"replay", "--manifest", (manifests / "split.json").string(), "--out",
               (dir / "again").string()});
  CHECK(r.status == 0);
  CHECK(testing::read_file(dir / "again/splits/train.csv") == split_before);

  // A different seed gives a different split.
  REQUIRE(run_cli({"--out", (dir / "other").string(), "split", "--in", corpus_path.string()})
              .status == 0);
  CHECK(testing::read_file(dir / "other/splits/train.csv") != split_before);

  // A changed input shows up as differing outputs.
  testing::write_file(corpus_path,
                      corpus::serialize_dataset(testing::synthetic_corpus(60, 40, 20, 2)));
  r = run_cli({"replay", "--manifest", (dir / "again/manifests/split.json").string()});
  CHECK(r.status == cli::kRuntimeFailure);
  CHECK(r.err.find("differs") != std::string::npos);
  testing::write_file(dir / "bad.json", "{\"tool\": \"other\"}");
  r = run_cli({"replay", "--manifest", (dir / "bad.json").string()});
  CHECK(r.status == cli::kValidationError);
}

TEST_CASE("config file precedence") {
  TempDir dir("cli");
  const auto corpus_path = write_corpus(dir);
  testing::write_file(dir / "run.ini",
                      "seed=7\n[split]\nfractions=[0.6,0.2,0.2]\n");
  auto r = run_cli({"--config", (dir / "run.ini").string(), "--out", (dir / "a").string(),
                    "split", "--in", corpus_path.string()});
  REQUIRE(r.status == 0);
  CHECK(corpus::load_dataset(dir / "a/splits/train.csv").size() == 60);
  const auto manifest = nlohmann::json::parse(testing::read_file(dir / "a/manifests/split.json"));
  CHECK(manifest.at("seed") == 7);

  // Flags beat the file.
  r = run_cli({"--config", (dir / "run.ini").string(), "--out", (dir / "b").string(), "--seed",
               "3", "split", "--in", corpus_path.string(), "--fractions", "0.8,0.1,0.1"});
  REQUIRE(r.status == 0);
  CHECK(corpus::load_dataset(dir / "b/splits/train.csv").size() == 80);
  CHECK(nlohmann::json::parse(testing::read_file(dir / "b/manifests/split.json")).at("seed") == 3);

  r = run_cli({"--config", (dir / "missing.ini").string(), "split", "--in",
               corpus_path.string()});
  CHECK(r.status == cli::kValidationError);
}

TEST_CASE("stats and agreement commands") {
  TempDir dir("cli");
  const auto corpus_path = write_corpus(dir);
  auto r = run_cli(with_out(dir, {"stats", "--in", corpus_path.string(), "--drop-not-kannada"}));
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("labels").at("Not-Kannada") == 0);
  CHECK(j.at("labels").at("Hope") == 40);

  testing::write_file(dir / "ann.csv",
                      "unit_id,annotator_id,label\n"
                      "1,a,Hope\n1,b,Hope\n2,a,Not-Hope\n2,b,Not-Hope\n");
  r = run_cli(with_out(dir, {"agreement", "--annotations", (dir / "ann.csv").string()}));
  REQUIRE(r.status == 0);
  CHECK(r.out == "krippendorff alpha (nominal): 1.000000\n");
}

}  // TEST_SUITE
