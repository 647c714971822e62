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

// Backends and utterance-level conversion.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "ipastream/error.hpp"
#include "ipastream/lexicon.hpp"
#include "ipastream/rules.hpp"
#include "ipastream/stream.hpp"
#include "ipastream/syllabary.hpp"
#include "ipastream/unicode.hpp"

namespace ipastream {

struct RulesBackend {
  std::shared_ptr<const RuleSet> rules;
};

struct LexiconBackend {
  std::shared_ptr<const Lexicon> lexicon;
  std::shared_ptr<const RuleSet> fallback;  ///< may be null
};

struct SyllabaryBackend {
  std::shared_ptr<const SyllableTable> table;
  bool split_tones = false;
};

/// Input lines are already phoneme streams produced by an external tool.
struct PassthroughBackend {};

using Backend = std::variant<RulesBackend, LexiconBackend, SyllabaryBackend, PassthroughBackend>;

/// Unmapped character -> occurrences. Merging two reports is associative.
using UnmappedCounts = std::map<std::string, std::size_t>;

inline void merge_into(UnmappedCounts& into, const UnmappedCounts& from) {
  for (const auto& [ch, n] : from) into[ch] += n;
}

/// Converts one orthographic word.
inline SegmentSeq convert_word(const Backend& backend, std::string_view word,
                               UnmappedCounts* unmapped = nullptr) {
  auto record = [&](const std::set<std::string>& chars) {
    if (unmapped)
      for (const auto& c : chars) ++(*unmapped)[c];
  };
  return std::visit(
      [&](const auto& b) -> SegmentSeq {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, RulesBackend>) {
          RuleOutput out = convert_rules(*b.rules, word);
          record(out.unmapped);
          return std::move(out.segments);
        } else if constexpr (std::is_same_v<B, LexiconBackend>) {
          std::set<std::string> missing;
          SegmentSeq out = convert_lexicon(*b.lexicon, b.fallback.get(), word, &missing);
          record(missing);
          return out;
        } else if constexpr (std::is_same_v<B, SyllabaryBackend>) {
          return convert_syllables(*b.table, word, b.split_tones);
        } else {
          return segments_from(word);
        }
      },
      backend);
}

/// Splits on whitespace, converts each word, separates words with
/// WORD_BOUNDARY when asked and closes the utterance with UTT_BOUNDARY.
/// Punctuation at word edges is stripped; punctuation-only words are dropped. Backend failures are rethrown as
/// ConversionError carrying the word and both indices.
inline PhonemeStream convert_utterance(const Backend& backend, std::string_view text,
                                       bool keep_word_boundaries, std::size_t utterance_index = 0,
                                       UnmappedCounts* unmapped = nullptr) {
  std::vector<StreamToken> tokens;
  if (std::holds_alternative<PassthroughBackend>(backend)) {
    tokens = parse_stream(text).tokens();
  } else {
    std::size_t word_index = 0;
    for (const auto& raw : unicode::split_whitespace(text)) {
      const std::size_t index = word_index++;
      const std::string word = unicode::trim_punctuation(raw);
      if (word.empty()) continue;
      SegmentSeq segments;
      try {
        segments = convert_word(backend, word, unmapped);
      } catch (const ConversionError&) {
        throw;
      } catch (const Error& e) {
        throw ConversionError(e.what(), word, index, utterance_index);
      }
      if (segments.empty()) continue;
      if (keep_word_boundaries && !tokens.empty()) tokens.emplace_back(WordBoundary{});
      for (auto& seg : segments) tokens.emplace_back(std::move(seg));
    }
  }
  if (!tokens.empty() && !is_utt_boundary(tokens.back())) tokens.emplace_back(UttBoundary{});
  return PhonemeStream(std::move(tokens));
}

}  // namespace ipastream
