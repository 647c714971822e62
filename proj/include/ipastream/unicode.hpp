// Copyright 2026 The ipastream Authors
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

// Thin UTF-8 helpers over ICU. Strings are UTF-8 everywhere in the library;
// ICU types never leak out of this header.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "ipastream/error.hpp"

namespace ipastream::unicode {

/// Canonical decomposition (NFD).
inline std::string nfd(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFD unavailable: ") + u_errorName(status));
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  // Fast path: most IPA input is already decomposed.
  if (normalizer->isNormalized(source, status) && U_SUCCESS(status)) {
    std::string out;
    return source.toUTF8String(out);
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString normalized = normalizer->normalize(source, status);
  if (U_FAILURE(status)) throw Error(std::string("NFD failed: ") + u_errorName(status));
  std::string out;
  return normalized.toUTF8String(out);
}

inline std::string case_fold(std::string_view text) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.foldCase();
  std::string out;
  return s.toUTF8String(out);
}

/// Decodes UTF-8; malformed bytes decode to U+FFFD.
inline std::u32string code_points(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

inline std::string to_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
  return out;
}

inline std::string to_utf8(std::u32string_view text) {
  std::string out;
  for (char32_t c : text) out += to_utf8(c);
  return out;
}

inline bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

inline bool is_punctuation(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

/// Non-spacing and enclosing marks (Mn, Me).
inline bool is_combining_mark(char32_t c) {
  const auto type = u_charType(static_cast<UChar32>(c));
  return type == U_NON_SPACING_MARK || type == U_ENCLOSING_MARK;
}

/// Modifier letters and symbols (Lm, Sk): ʰ ʷ ː ˥ and friends.
inline bool is_modifier(char32_t c) {
  const auto type = u_charType(static_cast<UChar32>(c));
  return type == U_MODIFIER_LETTER || type == U_MODIFIER_SYMBOL;
}

inline bool contains_whitespace(std::string_view text) {
  for (char32_t c : code_points(text))
    if (is_whitespace(c)) return true;
  return false;
}

/// Splits on runs of Unicode whitespace; no empty pieces.
inline std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::u32string current;
  for (char32_t c : code_points(text)) {
    if (is_whitespace(c)) {
      if (!current.empty()) out.push_back(to_utf8(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(to_utf8(current));
  return out;
}

inline bool is_punctuation_only(std::string_view word) {
  const std::u32string cps = code_points(word);
  if (cps.empty()) return false;
  for (char32_t c : cps)
    if (!is_punctuation(c)) return false;
  return true;
}

/// `word` without leading and trailing punctuation ("ac," -> "ac").
inline std::string trim_punctuation(std::string_view word) {
  const std::u32string cps = code_points(word);
  std::size_t begin = 0, end = cps.size();
  while (begin < end && is_punctuation(cps[begin])) ++begin;
  while (end > begin && is_punctuation(cps[end - 1])) --end;
  return to_utf8(std::u32string_view(cps).substr(begin, end - begin));
}

/// Character clusters: a base code point plus its trailing combining marks.
/// A leading orphan mark forms its own cluster.
inline std::vector<std::string> clusters(std::string_view text) {
  std::vector<std::string> out;
  for (char32_t c : code_points(text)) {
    if (is_combining_mark(c) && !out.empty())
      out.back() += to_utf8(c);
    else
      out.push_back(to_utf8(c));
  }
  return out;
}

}  // namespace ipastream::unicode
