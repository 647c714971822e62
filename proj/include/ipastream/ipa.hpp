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

// Glyph-level IPA classification used for inventory profiling, tone
// handling and folding suggestions.

#include <algorithm>
#include <string>
#include <string_view>

#include "ipastream/unicode.hpp"

namespace ipastream {

enum class SegmentClass { consonant, vowel, tone };

inline std::string_view to_string(SegmentClass c) {
  switch (c) {
    case SegmentClass::consonant: return "consonant";
    case SegmentClass::vowel: return "vowel";
    case SegmentClass::tone: return "tone";
  }
  return "consonant";
}

namespace ipa {

/// Base vowel-quality letters of the IPA chart, plus rhotic schwas and the
/// barred small capitals.
inline bool is_vowel_glyph(char32_t c) {
  static constexpr std::u32string_view kVowels =
      U"iyɨʉɯuɪʏʊeøɘɵɤoəɛœɜɞʌɔæɐaɶɑɒɚɝᵻᵿ";
  return kVowels.find(c) != std::u32string_view::npos;
}

/// Chao tone letters and the modifier tone letters block.
inline bool is_tone_glyph(char32_t c) {
  return (c >= 0x02E5 && c <= 0x02E9) || (c >= 0xA700 && c <= 0xA71F);
}

/// Combining vertical line below / above: syllabic consonant.
inline bool is_syllabic_mark(char32_t c) { return c == 0x0329 || c == 0x030D; }

inline std::size_t vowel_glyph_count(std::string_view segment) {
  const std::u32string cps = unicode::code_points(segment);
  return static_cast<std::size_t>(std::count_if(cps.begin(), cps.end(), is_vowel_glyph));
}

inline bool has_syllabic_mark(std::string_view segment) {
  const std::u32string cps = unicode::code_points(segment);
  return std::any_of(cps.begin(), cps.end(), is_syllabic_mark);
}

inline bool is_tone_only(std::string_view segment) {
  const std::u32string cps = unicode::code_points(segment);
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), is_tone_glyph);
}

/// Class inferred from glyphs alone: tone-letters only -> tone, any base
/// vowel glyph -> vowel, otherwise consonant.
inline SegmentClass infer_class(std::string_view segment) {
  if (is_tone_only(segment)) return SegmentClass::tone;
  if (vowel_glyph_count(segment) > 0) return SegmentClass::vowel;
  return SegmentClass::consonant;
}

/// Removes combining marks and modifier letters/symbols, leaving the base
/// letters: "tʰ" -> "t", "n̪" -> "n", "aː" -> "a".
inline std::string strip_marks(std::string_view segment) {
  std::u32string kept;
  for (char32_t c : unicode::code_points(segment))
    if (!unicode::is_combining_mark(c) && !unicode::is_modifier(c)) kept.push_back(c);
  return unicode::to_utf8(kept);
}

/// Index of the first tone glyph, in bytes, or npos.
inline std::size_t first_tone_offset(std::string_view segment) {
  std::size_t offset = 0;
  for (char32_t c : unicode::code_points(segment)) {
    if (is_tone_glyph(c)) return offset;
    offset += unicode::to_utf8(c).size();
  }
  return std::string_view::npos;
}

}  // namespace ipa
}  // namespace ipastream
