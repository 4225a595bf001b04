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

// UTF-8 and Unicode character-class helpers shared by the text modules.

#include <string>
#include <string_view>
#include <vector>

namespace hopebench::text {

bool is_valid_utf8(std::string_view bytes);

/// Decodes UTF-8; throws ValidationError on malformed input.
std::u32string decode_utf8(std::string_view bytes);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view cps);

bool is_whitespace(char32_t cp);
/// Letters of any script plus spacing/non-spacing combining marks, so that
/// Kannada vowel signs and virama count as part of a word.
bool is_letter(char32_t cp);
/// Decimal digits of any script.
bool is_digit(char32_t cp);
inline bool is_word_char(char32_t cp) { return is_letter(cp) || is_digit(cp); }

/// U+0C80..U+0CFF.
bool is_kannada(char32_t cp);
/// Basic Latin, Latin-1 and the Latin Extended blocks, letters only.
bool is_latin_letter(char32_t cp);
bool is_ascii_digit(char32_t cp);
/// Pictographic emoji, emoji-presentation symbols, regional indicators,
/// skin-tone modifiers and the joiner/variation selectors that glue them.
bool is_emoji(char32_t cp);
/// Characters that end a sentence: . ! ? newline and the danda U+0964.
bool is_sentence_break(char32_t cp);
/// Punctuation preserved by cleaning: . ! ? , and the danda.
bool is_kept_punctuation(char32_t cp);

char32_t to_lower_latin(char32_t cp);

/// Splits on runs of Unicode whitespace; never yields empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Splits on sentence-break characters; pieces are trimmed and empty pieces
/// dropped.
std::vector<std::string> split_sentences(std::string_view s);

}  // namespace hopebench::text
