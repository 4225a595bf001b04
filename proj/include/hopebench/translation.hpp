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

// Translation of the code-mixed text for the second channel.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hopebench::dualchannel {

struct Translation {
  std::string text;
  bool from_cache = false;
  /// No translation was available and the input was returned unchanged.
  bool miss = false;
};

enum class TranslationMode { FileCache, Identity, Http };

/// Cache-backed translator. Lookups may run concurrently; cache writes are
/// serialized.
class TranslationProvider {
 public:
  static TranslationProvider identity();
  /// Loads the TSV cache when the file exists.
  static TranslationProvider file_cache(const std::filesystem::path& cache);
  /// POSTs {"q": text, "target": "en"} and reads "translatedText". Only plain
  /// http URLs are supported.
  static TranslationProvider http(std::string url,
                                  std::optional<std::filesystem::path> cache = std::nullopt);

  TranslationProvider(TranslationProvider&& other) noexcept;

  TranslationMode mode() const { return mode_; }
  Translation translate(std::string_view text);
  void insert(std::string source, std::string english);
  /// Writes the cache back to its file, sorted by source text.
  void save() const;

  std::size_t cache_size() const;
  std::size_t requests() const;
  std::vector<std::string> warnings() const;

  static std::string escape(std::string_view field);
  static std::string unescape(std::string_view field);

 private:
  explicit TranslationProvider(TranslationMode mode) : mode_(mode) {}
  std::optional<std::string> request(std::string_view text);

  TranslationMode mode_;
  std::string url_;
  std::optional<std::filesystem::path> cache_path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::string> cache_;
  std::size_t requests_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace hopebench::dualchannel
