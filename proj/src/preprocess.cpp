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

#include "hopebench/preprocess.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "hopebench/embedded_data.hpp"
#include "hopebench/error.hpp"
#include "hopebench/text.hpp"

namespace hopebench::preprocess {

namespace {

// Variation selectors and skin-tone modifiers never change the emoji name.
bool is_selector(char32_t cp) {
  return cp == 0xFE0F || cp == 0xFE0E || (cp >= 0x1F3FB && cp <= 0x1F3FF);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && ascii_lower(s.substr(0, prefix.size())) == prefix;
}

// Replaces the link part of a token with "URL"; returns the token unchanged
// when it holds no link.
std::string replace_url(std::string_view token) {
  if (istarts_with(token, "www.")) return "URL";
  const std::string lower = ascii_lower(token);
  std::size_t at = std::min(lower.find("http://"), lower.find("https://"));
  if (at == std::string::npos) return std::string(token);
  if (at == 0) return "URL";
  return std::string(token.substr(0, at)) + " URL";
}

std::string replace_urls(std::string_view s) {
  std::string out;
  for (auto token : text::split_whitespace(s)) {
    if (!out.empty()) out.push_back(' ');
    out += replace_url(token);
  }
  return out;
}

}  // namespace

std::string_view script_name(ScriptTag tag) {
  static constexpr std::array<std::string_view, 5> names = {"Kannada", "Latin", "Digit", "Emoji",
                                                            "Other"};
  return names[static_cast<std::size_t>(tag)];
}

std::string_view mix_type_name(MixType type) {
  static constexpr std::array<std::string_view, 7> names = {
      "Type1", "Type2", "Type3", "Type4", "Type5", "Type6", "Unknown"};
  return names[static_cast<std::size_t>(type)];
}

const EmojiMap& EmojiMap::builtin() {
  static const EmojiMap map = parse_tsv(embedded::emoji_names_tsv());
  return map;
}

EmojiMap EmojiMap::parse_tsv(std::string_view tsv) {
  EmojiMap m;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError("emoji map line " + std::to_string(line_number) + ": missing tab");
    }
    std::u32string key;
    std::istringstream hex(line.substr(0, tab));
    std::string part;
    while (hex >> part) {
      try {
        const auto cp = static_cast<char32_t>(std::stoul(part, nullptr, 16));
        if (!is_selector(cp)) key.push_back(cp);
      } catch (const std::exception&) {
        throw ValidationError("emoji map line " + std::to_string(line_number) +
                              ": bad code point '" + part + "'");
      }
    }
    const std::string_view name_field = std::string_view(line).substr(tab + 1);
    std::string name;
    for (auto word : text::split_whitespace(name_field)) {
      if (!name.empty()) name.push_back(' ');
      name += ascii_lower(word);
    }
    if (key.empty() || name.empty()) continue;
    m.max_length_ = std::max(m.max_length_, key.size());
    m.names_[std::move(key)] = std::move(name);
  }
  return m;
}

EmojiMap EmojiMap::load(const std::filesystem::path& path) {
  return parse_tsv(read_text_file(path));
}

std::optional<EmojiMap::Match> EmojiMap::match(std::u32string_view cps, std::size_t pos) const {
  std::u32string key;
  std::vector<std::size_t> ends;  // position after each collected code point
  std::size_t i = pos;
  while (i < cps.size() && key.size() < max_length_) {
    if (is_selector(cps[i])) {
      ++i;
      continue;
    }
    key.push_back(cps[i]);
    ++i;
    while (i < cps.size() && is_selector(cps[i])) ++i;
    ends.push_back(i);
  }
  for (std::size_t len = key.size(); len > 0; --len) {
    auto it = names_.find(key.substr(0, len));
    if (it != names_.end()) return Match{it->second, ends[len - 1] - pos};
  }
  return std::nullopt;
}

std::string clean(std::string_view input, const EmojiMap& emoji) {
  const std::u32string cps = text::decode_utf8(replace_urls(input));
  std::string out;
  out.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size();) {
    const char32_t cp = cps[i];
    if (!is_selector(cp)) {
      if (auto m = emoji.match(cps, i)) {
        out.push_back(' ');
        out += m->name;
        out.push_back(' ');
        i += m->consumed;
        continue;
      }
    }
    if (text::is_emoji(cp) || text::is_whitespace(cp)) {
      out.push_back(' ');
    } else if (text::is_word_char(cp) || text::is_kept_punctuation(cp)) {
      text::append_utf8(out, cp);
    }
    ++i;
  }
  // Dropping characters can expose a "www." prefix, so links are replaced
  // again; this also collapses whitespace and trims.
  return replace_urls(out);
}

ScriptTag tag_token(std::string_view token) {
  std::array<std::size_t, 5> counts{};
  for (char32_t cp : text::decode_utf8(token)) {
    ScriptTag t = ScriptTag::Other;
    if (text::is_kannada(cp)) {
      t = ScriptTag::Kannada;
    } else if (text::is_latin_letter(cp)) {
      t = ScriptTag::Latin;
    } else if (text::is_digit(cp)) {
      t = ScriptTag::Digit;
    } else if (text::is_emoji(cp)) {
      t = ScriptTag::Emoji;
    }
    ++counts[static_cast<std::size_t>(t)];
  }
  const auto best = std::max_element(counts.begin(), counts.end());
  if (*best == 0) return ScriptTag::Other;
  if (std::count(counts.begin(), counts.end(), *best) > 1) return ScriptTag::Other;
  return static_cast<ScriptTag>(best - counts.begin());
}

std::vector<std::pair<std::string, ScriptTag>> script_profile(std::string_view input) {
  std::vector<std::pair<std::string, ScriptTag>> out;
  for (auto token : text::split_whitespace(input)) {
    out.emplace_back(std::string(token), tag_token(token));
  }
  return out;
}

namespace {

std::unordered_set<std::string> word_set(std::string_view content) {
  std::unordered_set<std::string> words;
  for (auto w : text::split_whitespace(content)) words.insert(ascii_lower(w));
  return words;
}

// Lowercased Latin letters of a token; other characters are dropped.
std::string latin_word(std::string_view token) {
  std::string out;
  for (char32_t cp : text::decode_utf8(token)) {
    if (text::is_latin_letter(cp)) text::append_utf8(out, text::to_lower_latin(cp));
  }
  return out;
}

bool has_mixed_scripts(std::string_view token) {
  bool kannada = false;
  bool latin = false;
  for (char32_t cp : text::decode_utf8(token)) {
    kannada = kannada || text::is_kannada(cp);
    latin = latin || text::is_latin_letter(cp);
  }
  return kannada && latin;
}

TaggedToken tag_with_language(std::string_view token, const Lexicon& lexicon) {
  TaggedToken t{std::string(token), tag_token(token), std::nullopt};
  if (t.tag == ScriptTag::Latin) {
    const std::string word = latin_word(token);
    if (!lexicon.is_neutral(word)) t.is_english = lexicon.is_english(word);
  }
  return t;
}

}  // namespace

const Lexicon& Lexicon::builtin() {
  static const Lexicon lexicon =
      from_text(embedded::english_lexicon_txt(), embedded::neutral_tokens_txt());
  return lexicon;
}

Lexicon Lexicon::from_text(std::string_view words, std::string_view neutral) {
  Lexicon l;
  l.words_ = word_set(words);
  l.neutral_ = word_set(neutral);
  return l;
}

Lexicon Lexicon::load(const std::filesystem::path& words,
                      const std::optional<std::filesystem::path>& neutral) {
  return from_text(read_text_file(words), neutral ? read_text_file(*neutral) : std::string());
}

bool Lexicon::is_english(std::string_view word) const {
  return words_.contains(std::string(word));
}

bool Lexicon::is_neutral(std::string_view word) const {
  return neutral_.contains(std::string(word));
}

nlohmann::json CodeMixProfile::to_json() const {
  nlohmann::json tags = nlohmann::json::array();
  for (const auto& t : token_tags) {
    nlohmann::json item = {{"token", t.token}, {"script", script_name(t.tag)}};
    item["is_english"] = t.is_english ? nlohmann::json(*t.is_english) : nlohmann::json(nullptr);
    tags.push_back(std::move(item));
  }
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : sentence_scripts) {
    sentences.push_back({{"dominant", script_name(s.dominant)},
                         {"kannada_script", s.kannada_script},
                         {"english", s.english},
                         {"romanized", s.romanized}});
  }
  return {{"mix_type", mix_type_name(mix_type)},
          {"token_tags", std::move(tags)},
          {"sentence_scripts", std::move(sentences)}};
}

CodeMixProfile codemix_type(std::string_view input, const Lexicon& lexicon,
                            const CodeMixConfig& config) {
  CodeMixProfile profile;
  bool mixed_token = false;
  for (auto token : text::split_whitespace(input)) {
    profile.token_tags.push_back(tag_with_language(token, lexicon));
    mixed_token = mixed_token || has_mixed_scripts(token);
  }

  std::size_t alphabetic_sentences = 0;
  for (const auto& sentence : text::split_sentences(input)) {
    SentenceScript s;
    std::size_t latin = 0;
    for (auto token : text::split_whitespace(sentence)) {
      const auto t = tag_with_language(token, lexicon);
      if (t.tag == ScriptTag::Kannada) ++s.kannada_script;
      if (t.tag == ScriptTag::Latin) ++latin;
      if (t.is_english) ++(*t.is_english ? s.english : s.romanized);
    }
    if (s.kannada_script > latin) {
      s.dominant = ScriptTag::Kannada;
    } else if (latin > s.kannada_script) {
      s.dominant = ScriptTag::Latin;
    }
    if (s.kannada_script + latin > 0) ++alphabetic_sentences;
    profile.sentence_scripts.push_back(s);
  }

  std::size_t kannada = 0;
  std::size_t latin = 0;
  std::size_t english = 0;
  std::size_t romanized = 0;
  for (const auto& t : profile.token_tags) {
    if (t.tag == ScriptTag::Kannada) ++kannada;
    if (t.tag == ScriptTag::Latin) ++latin;
    if (t.is_english) ++(*t.is_english ? english : romanized);
  }

  MixType type = MixType::Unknown;
  if (mixed_token) {
    type = MixType::Type4;
  } else if (kannada > 0 && latin == 0) {
    type = MixType::Type1;
  } else if (latin > 0 && kannada == 0) {
    const std::size_t judged = english + romanized;
    const double share =
        judged == 0 ? 1.0 : static_cast<double>(english) / static_cast<double>(judged);
    if (share > config.english_high) {
      type = MixType::Type1;
    } else if (share < config.english_low) {
      type = MixType::Type3;
    } else {
      type = MixType::Type5;
    }
  } else if (kannada > 0 && latin > 0) {
    if (alphabetic_sentences >= 2) {
      type = (english > 0 && romanized > 0) ? MixType::Type6 : MixType::Type2;
    } else {
      type = MixType::Type4;
    }
  }
  profile.mix_type = type;
  return profile;
}

}  // namespace hopebench::preprocess
