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

// Syllabary backends (pinyin, jyutping): split romanized text into table
// syllables, look each one up, then attach its tone to the nucleus.
//
// Table file, tab separated:
//
//   #!nucleus=first_vowel
//   ma1<TAB>m a<TAB>˥
//   de<TAB>d ə<TAB>

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ipastream/error.hpp"
#include "ipastream/ipa.hpp"
#include "ipastream/stream.hpp"
#include "ipastream/unicode.hpp"

namespace ipastream {

/// Which segment of a syllable carries its tone. Both rules fall back to
/// the first segment with a syllabic mark when the syllable has no vowel.
enum class NucleusRule { first_vowel, last_vowel };

struct SyllableEntry {
  SegmentSeq segments;
  std::string tone;  ///< tone glyphs, possibly empty
};

/// Segments of one syllable with its tone not yet attached.
struct PendingSyllable {
  SegmentSeq segments;
  std::string tone;
  NucleusRule nucleus = NucleusRule::first_vowel;
};

class SyllableTable {
 public:
  SyllableTable() = default;

  void add(std::string_view romanization, SyllableEntry entry) {
    std::u32string key = unicode::code_points(unicode::nfd(romanization));
    if (key.empty()) throw ArgumentError("empty syllable romanization");
    if (entry.segments.empty())
      throw ArgumentError("syllable '" + std::string(romanization) + "' has no segments");
    longest_ = std::max(longest_, key.size());
    entries_.emplace(std::move(key), std::move(entry));
  }

  const SyllableEntry* find(std::string_view syllable) const {
    auto it = entries_.find(unicode::code_points(unicode::nfd(syllable)));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t longest_key() const noexcept { return longest_; }
  std::size_t size() const noexcept { return entries_.size(); }
  NucleusRule nucleus_rule() const noexcept { return nucleus_; }
  void set_nucleus_rule(NucleusRule rule) noexcept { nucleus_ = rule; }

  bool contains(const std::u32string& key) const { return entries_.contains(key); }

 private:
  std::map<std::u32string, SyllableEntry> entries_;
  std::size_t longest_ = 0;
  NucleusRule nucleus_ = NucleusRule::first_vowel;
};

inline SyllableTable parse_syllable_table(std::istream& in) {
  SyllableTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("#!nucleus=")) {
      const std::string value = line.substr(10);
      if (value == "first_vowel")
        table.set_nucleus_rule(NucleusRule::first_vowel);
      else if (value == "last_vowel")
        table.set_nucleus_rule(NucleusRule::last_vowel);
      else
        throw FormatError("unknown nucleus rule '" + value + "'", line_no);
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 2 || cols.size() > 3)
      throw FormatError("syllable table rows have 2 or 3 tab-separated columns", line_no);
    try {
      SyllableEntry entry{segments_from(cols[1]), cols.size() == 3 ? cols[2] : std::string()};
      // Tone column may carry stray spaces.
      std::string tone;
      for (const auto& piece : unicode::split_whitespace(entry.tone)) tone += piece;
      entry.tone = unicode::nfd(tone);
      table.add(cols[0], std::move(entry));
    } catch (const ArgumentError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return table;
}

inline SyllableTable parse_syllable_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_syllable_table(in);
}

inline SyllableTable load_syllable_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open syllable table '" + path + "'");
  return parse_syllable_table(in);
}

/// Greedy longest-match split. The pieces concatenate back to the input.
/// Throws SegmentationError with the code-point offset where no key matches.
inline std::vector<std::string> syllabify(const SyllableTable& table, std::string_view text) {
  const std::u32string cps = unicode::code_points(unicode::nfd(text));
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t len = std::min(table.longest_key(), cps.size() - i);
    for (; len > 0; --len)
      if (table.contains(cps.substr(i, len))) break;
    if (len == 0) throw SegmentationError(std::string(text), i);
    out.push_back(unicode::to_utf8(std::u32string_view(cps).substr(i, len)));
    i += len;
  }
  return out;
}

inline PendingSyllable syllable_to_ipa(const SyllableTable& table, std::string_view syllable) {
  const SyllableEntry* entry = table.find(syllable);
  if (!entry) throw LookupError("syllable '" + std::string(syllable) + "' is not in the table");
  return {entry->segments, entry->tone, table.nucleus_rule()};
}

/// Index of the tone-bearing segment, or npos.
inline std::size_t find_nucleus(const SegmentSeq& segments, NucleusRule rule) {
  const std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t found = npos;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (ipa::infer_class(segments[i].text()) == SegmentClass::vowel) {
      found = i;
      if (rule == NucleusRule::first_vowel) break;
    }
  }
  if (found != npos) return found;
  for (std::size_t i = 0; i < segments.size(); ++i)
    if (ipa::has_syllabic_mark(segments[i].text())) return i;
  return npos;
}

/// split_tones off: tone glyphs are appended to the nucleus ("a˥").
/// split_tones on: the tone becomes its own token right after the nucleus.
inline SegmentSeq merge_tones(const PendingSyllable& syllable, bool split_tones) {
  if (syllable.tone.empty()) return syllable.segments;
  const std::size_t nucleus = find_nucleus(syllable.segments, syllable.nucleus);
  if (nucleus == static_cast<std::size_t>(-1))
    throw ToneAttachmentError("no nucleus for tone '" + syllable.tone + "' in '" +
                              join(syllable.segments) + "'");
  SegmentSeq out;
  out.reserve(syllable.segments.size() + 1);
  for (std::size_t i = 0; i < syllable.segments.size(); ++i) {
    if (i != nucleus) {
      out.push_back(syllable.segments[i]);
    } else if (split_tones) {
      out.push_back(syllable.segments[i]);
      out.emplace_back(syllable.tone);
    } else {
      out.emplace_back(syllable.segments[i].text() + syllable.tone);
    }
  }
  return out;
}

/// A whole romanized word.
inline SegmentSeq convert_syllables(const SyllableTable& table, std::string_view word,
                                    bool split_tones) {
  SegmentSeq out;
  for (const auto& syllable : syllabify(table, word)) {
    SegmentSeq part = merge_tones(syllable_to_ipa(table, syllable), split_tones);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace ipastream
