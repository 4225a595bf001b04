#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hopebench/agreement.hpp"
#include "hopebench/corpus.hpp"
#include "hopebench/dualchannel.hpp"

namespace hopebench::testing {

/// The six code-mixing typology examples, Type1 through Type6 in order.
extern const std::vector<std::string> kTypologyFixtures;

/// 64 examples, 32 per class, 3 to 8 token ids each. Class 0 draws ids from
/// the lower half of the vocabulary and class 1 from the upper half, in
/// every channel, so the two classes share no token.
std::vector<dualchannel::Example> separable_set(std::uint64_t seed, std::size_t vocab_size,
                                                std::size_t channels);

/// Labeled comments with words drawn from small per-class pools, in file
/// order NotHope..., Hope..., NotKannada... shuffled by `seed`.
corpus::Dataset synthetic_corpus(std::size_t not_hope, std::size_t hope, std::size_t not_kannada,
                                 std::uint64_t seed);

/// Records for table[unit][annotator] (label index, or -1 when missing).
/// Units are "u<i>", annotators "a<j>".
std::vector<agreement::AnnotationRecord> records_from_table(
    const std::vector<std::vector<int>>& table);

/// Fits the library TF-IDF on `docs` (word analyzer), transforms every doc
/// and compares vocabulary, document frequencies and weights with the naive
/// recount. Also checks unit norm. Returns a description of the first
/// disagreement, or nullopt.
std::optional<std::string> tfidf_mismatch(const std::vector<std::vector<std::string>>& docs,
                                          int n_min, int n_max, std::size_t min_df,
                                          double tolerance = 1e-12);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

struct CliResult {
  int status = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args);

}  // namespace hopebench::testing
