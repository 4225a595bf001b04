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

#include "hopebench/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "hopebench/error.hpp"

namespace hopebench::text {

bool is_valid_utf8(std::string_view bytes) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(bytes.data());
  const auto length = static_cast<std::int32_t>(bytes.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(bytes.data());
  const auto length = static_cast<std::int32_t>(bytes.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw ValidationError("invalid UTF-8 byte sequence at offset " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool is_letter(char32_t cp) {
  switch (u_charType(static_cast<UChar32>(cp))) {
    case U_UPPERCASE_LETTER:
    case U_LOWERCASE_LETTER:
    case U_TITLECASE_LETTER:
    case U_MODIFIER_LETTER:
    case U_OTHER_LETTER:
    case U_NON_SPACING_MARK:
    case U_COMBINING_SPACING_MARK:
      return true;
    default:
      return false;
  }
}

bool is_digit(char32_t cp) { return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER; }

bool is_kannada(char32_t cp) { return cp >= 0x0C80 && cp <= 0x0CFF; }

bool is_latin_letter(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
  return cp >= 0x1E00 && cp <= 0x1EFF;
}

bool is_ascii_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_emoji(char32_t cp) {
  const auto c = static_cast<UChar32>(cp);
  if (cp == 0x200D || cp == 0xFE0F || cp == 0xFE0E || cp == 0x20E3) return true;
  if (cp < 0x80) return false;  // '#', '*' and digits carry the Emoji property
  return u_hasBinaryProperty(c, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(c, UCHAR_EMOJI_PRESENTATION) ||
         u_hasBinaryProperty(c, UCHAR_REGIONAL_INDICATOR) ||
         u_hasBinaryProperty(c, UCHAR_EMOJI_MODIFIER);
}

bool is_sentence_break(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == '\n' || cp == 0x0964;
}

bool is_kept_punctuation(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == ',' || cp == 0x0964;
}

char32_t to_lower_latin(char32_t cp) {
  if (!is_latin_letter(cp)) return cp;
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> pieces;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto length = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  std::int32_t start = -1;
  while (i < length) {
    const std::int32_t at = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    const bool space = c >= 0 && u_isUWhiteSpace(c);
    if (space) {
      if (start >= 0) {
        pieces.push_back(s.substr(start, at - start));
        start = -1;
      }
    } else if (start < 0) {
      start = at;
    }
  }
  if (start >= 0) pieces.push_back(s.substr(start));
  return pieces;
}

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> sentences;
  std::u32string current;
  auto flush = [&] {
    const std::string encoded = encode_utf8(current);
    std::string piece;
    for (auto word : split_whitespace(encoded)) {
      if (!piece.empty()) piece.push_back(' ');
      piece.append(word);
    }
    if (!piece.empty()) sentences.push_back(std::move(piece));
    current.clear();
  };
  for (char32_t cp : decode_utf8(s)) {
    if (is_sentence_break(cp)) {
      flush();
    } else {
      current.push_back(cp);
    }
  }
  flush();
  return sentences;
}

}  // namespace hopebench::text
