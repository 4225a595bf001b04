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

// Comment cleaning (URLs, emoji, special characters, whitespace), per-token
// script tagging and a heuristic code-mixing typology for Kannada-English.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hopebench::preprocess {

enum class ScriptTag { Kannada, Latin, Digit, Emoji, Other };
std::string_view script_name(ScriptTag tag);

enum class MixType { Type1, Type2, Type3, Type4, Type5, Type6, Unknown };
std::string_view mix_type_name(MixType type);

/// Emoji sequence -> lowercase name. Variation selectors and skin-tone
/// modifiers are ignored on both the key and the input side.
class EmojiMap {
 public:
  struct Match {
    std::string_view name;
    std::size_t consumed = 0;  // code points, including skipped selectors
  };

  /// Table compiled from data/emoji_names.tsv.
  static const EmojiMap& builtin();
  /// Lines of "HEX[ HEX...]\tname"; '#' starts a comment line.
  static EmojiMap parse_tsv(std::string_view tsv);
  static EmojiMap load(const std::filesystem::path& path);

  std::optional<Match> match(std::u32string_view cps, std::size_t pos) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::map<std::u32string, std::string> names_;
  std::size_t max_length_ = 0;
};

/// 1. tokens holding an http(s):// link or starting with www. become "URL";
/// 2. emoji become " name ", unknown emoji become a space;
/// 3. characters other than letters, marks, digits, whitespace and
///    . ! ? , U+0964 are dropped; whitespace runs collapse and ends are trimmed.
/// clean(clean(x)) == clean(x).
std::string clean(std::string_view text, const EmojiMap& emoji = EmojiMap::builtin());

/// Majority character class of a token; ties go to Other.
ScriptTag tag_token(std::string_view token);

/// One (token, tag) per whitespace-separated token.
std::vector<std::pair<std::string, ScriptTag>> script_profile(std::string_view text);

/// English word list plus language-neutral tokens (address terms, names of
/// places and brands) that count as neither English nor Kannada.
class Lexicon {
 public:
  static const Lexicon& builtin();
  static Lexicon from_text(std::string_view words, std::string_view neutral = {});
  static Lexicon load(const std::filesystem::path& words,
                      const std::optional<std::filesystem::path>& neutral = std::nullopt);

  bool is_english(std::string_view lowercase_word) const;
  bool is_neutral(std::string_view lowercase_word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
  std::unordered_set<std::string> neutral_;
};

struct CodeMixConfig {
  /// Latin-only text with an English share below this is romanized Kannada.
  double english_low = 0.10;
  /// Latin-only text with an English share above this is monolingual English.
  double english_high = 0.80;
};

struct TaggedToken {
  std::string token;
  ScriptTag tag = ScriptTag::Other;
  /// Set for Latin tokens that are not language-neutral.
  std::optional<bool> is_english;
};

struct SentenceScript {
  ScriptTag dominant = ScriptTag::Other;
  std::size_t kannada_script = 0;
  std::size_t english = 0;
  std::size_t romanized = 0;
};

struct CodeMixProfile {
  std::vector<TaggedToken> token_tags;
  std::vector<SentenceScript> sentence_scripts;
  MixType mix_type = MixType::Unknown;

  nlohmann::json to_json() const;
};

/// Heuristic typology:
///   Type1 one script and one language;
///   Type2 both scripts across several sentences, Latin words all English;
///   Type3 Latin only, English share below english_low;
///   Type4 both scripts inside one token, or within a single sentence;
///   Type5 Latin only, English share in [english_low, english_high];
///   Type6 both scripts across sentences with English and romanized Kannada.
CodeMixProfile codemix_type(std::string_view text, const Lexicon& lexicon = Lexicon::builtin(),
                            const CodeMixConfig& config = {});

}  // namespace hopebench::preprocess
