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

// Pronunciation lexicon: tab-separated "word<TAB>space separated segments".
// Lookup is case-folded. The first entry for a word wins.

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ipastream/error.hpp"
#include "ipastream/rules.hpp"
#include "ipastream/stream.hpp"
#include "ipastream/unicode.hpp"

namespace ipastream {

class Lexicon {
 public:
  Lexicon() = default;

  /// Returns false if the word was already present.
  bool add(std::string_view word, SegmentSeq segments) {
    std::string key = normalize_key(word);
    if (key.empty() || unicode::contains_whitespace(key))
      throw ArgumentError("lexicon word '" + std::string(word) + "' is empty or has whitespace");
    return entries_.emplace(std::move(key), std::move(segments)).second;
  }

  const SegmentSeq* find(std::string_view word) const {
    auto it = entries_.find(normalize_key(word));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }

  static std::string normalize_key(std::string_view word) {
    return unicode::nfd(unicode::case_fold(word));
  }

 private:
  std::unordered_map<std::string, SegmentSeq> entries_;
};

inline Lexicon parse_lexicon(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("lexicon line has no tab", line_no);
    try {
      lex.add(std::string_view(line).substr(0, tab),
              segments_from(std::string_view(line).substr(tab + 1)));
    } catch (const ArgumentError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return lex;
}

inline Lexicon parse_lexicon(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_lexicon(in);
}

inline Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open lexicon '" + path + "'");
  return parse_lexicon(in);
}

/// Lexicon hit, else rule fallback, else OutOfVocabularyError. Unmapped
/// characters from the fallback are added to `unmapped` when given.
inline SegmentSeq convert_lexicon(const Lexicon& lex, const RuleSet* fallback,
                                  std::string_view word,
                                  std::set<std::string>* unmapped = nullptr) {
  if (const SegmentSeq* hit = lex.find(word)) return *hit;
  if (!fallback) throw OutOfVocabularyError(std::string(word));
  RuleOutput out = convert_rules(*fallback, word);
  if (unmapped) unmapped->insert(out.unmapped.begin(), out.unmapped.end());
  return std::move(out.segments);
}

}  // namespace ipastream
