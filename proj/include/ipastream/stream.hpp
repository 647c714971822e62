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

// The phoneme-stream representation: IPA segments separated by single
// spaces, with reserved tokens for word and utterance boundaries.
//
//   ɛ n dʒ ɔɪ WORD_BOUNDARY ...

#include <compare>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ipastream/error.hpp"
#include "ipastream/unicode.hpp"

namespace ipastream {

inline constexpr std::string_view kWordBoundary = "WORD_BOUNDARY";
inline constexpr std::string_view kUttBoundary = "UTT_BOUNDARY";

/// One phoneme. May span several code points (dʒ, ɔɪ, a˥); stored NFD.
class IpaSegment {
 public:
  explicit IpaSegment(std::string_view text) : text_(unicode::nfd(text)) {
    if (text_.empty()) throw ArgumentError("empty IPA segment");
    if (unicode::contains_whitespace(text_))
      throw ArgumentError("IPA segment '" + text_ + "' contains whitespace");
    if (text_ == kWordBoundary || text_ == kUttBoundary)
      throw ArgumentError("'" + text_ + "' is a reserved boundary token");
  }

  const std::string& text() const noexcept { return text_; }

  friend auto operator<=>(const IpaSegment&, const IpaSegment&) = default;
  friend bool operator==(const IpaSegment&, const IpaSegment&) = default;

 private:
  std::string text_;
};

using SegmentSet = std::set<IpaSegment>;
using SegmentSeq = std::vector<IpaSegment>;

/// Parses space-separated segments: "k æ t" -> [k, æ, t].
inline SegmentSeq segments_from(std::string_view text) {
  SegmentSeq out;
  for (const auto& piece : unicode::split_whitespace(text)) out.emplace_back(piece);
  return out;
}

inline std::string join(const SegmentSeq& segments, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += sep;
    out += segments[i].text();
  }
  return out;
}

struct WordBoundary {
  friend bool operator==(WordBoundary, WordBoundary) { return true; }
};
struct UttBoundary {
  friend bool operator==(UttBoundary, UttBoundary) { return true; }
};

using StreamToken = std::variant<IpaSegment, WordBoundary, UttBoundary>;

inline bool is_segment(const StreamToken& t) { return std::holds_alternative<IpaSegment>(t); }
inline bool is_word_boundary(const StreamToken& t) {
  return std::holds_alternative<WordBoundary>(t);
}
inline bool is_utt_boundary(const StreamToken& t) { return std::holds_alternative<UttBoundary>(t); }

inline std::string_view token_text(const StreamToken& t) {
  if (const auto* seg = std::get_if<IpaSegment>(&t)) return seg->text();
  return is_word_boundary(t) ? kWordBoundary : kUttBoundary;
}

/// An immutable token sequence. Construction repairs boundary adjacency:
/// repeated word boundaries collapse, and a word boundary touching an
/// utterance boundary is dropped.
class PhonemeStream {
 public:
  PhonemeStream() = default;

  explicit PhonemeStream(std::vector<StreamToken> tokens) {
    tokens_.reserve(tokens.size());
    for (auto& token : tokens) {
      if (is_word_boundary(token)) {
        if (!tokens_.empty() && !is_segment(tokens_.back())) continue;
      } else if (is_utt_boundary(token)) {
        if (!tokens_.empty() && is_word_boundary(tokens_.back())) tokens_.pop_back();
      }
      tokens_.push_back(std::move(token));
    }
  }

  const std::vector<StreamToken>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }

  /// Segment tokens only, in order.
  SegmentSeq segments() const {
    SegmentSeq out;
    for (const auto& t : tokens_)
      if (const auto* seg = std::get_if<IpaSegment>(&t)) out.push_back(*seg);
    return out;
  }

  std::size_t segment_count() const {
    std::size_t n = 0;
    for (const auto& t : tokens_) n += is_segment(t);
    return n;
  }

  friend bool operator==(const PhonemeStream&, const PhonemeStream&) = default;

 private:
  std::vector<StreamToken> tokens_;
};

/// Total on text: boundary literals become boundaries, everything else a
/// segment. Whitespace runs collapse.
inline PhonemeStream parse_stream(std::string_view line) {
  std::vector<StreamToken> tokens;
  for (auto& piece : unicode::split_whitespace(line)) {
    if (piece == kWordBoundary)
      tokens.emplace_back(WordBoundary{});
    else if (piece == kUttBoundary)
      tokens.emplace_back(UttBoundary{});
    else
      tokens.emplace_back(IpaSegment(piece));
  }
  return PhonemeStream(std::move(tokens));
}

/// Single-space-joined tokens. A final utterance boundary is implied by the
/// end of line and is not written.
inline std::string emit_stream(const PhonemeStream& s, bool keep_word_boundaries) {
  const auto& tokens = s.tokens();
  std::size_t end = tokens.size();
  if (end > 0 && is_utt_boundary(tokens[end - 1])) --end;
  std::string out;
  for (std::size_t i = 0; i < end; ++i) {
    if (!keep_word_boundaries && is_word_boundary(tokens[i])) continue;
    if (!out.empty()) out += ' ';
    out += token_text(tokens[i]);
  }
  return out;
}

/// One line per utterance: the stream is cut at every utterance boundary.
inline std::vector<std::string> emit_utterances(const PhonemeStream& s, bool keep_word_boundaries) {
  std::vector<std::string> lines;
  std::vector<StreamToken> current;
  auto flush = [&] {
    lines.push_back(emit_stream(PhonemeStream(std::move(current)), keep_word_boundaries));
    current.clear();
  };
  for (const auto& t : s.tokens()) {
    if (is_utt_boundary(t))
      flush();
    else
      current.push_back(t);
  }
  if (!current.empty()) flush();
  return lines;
}

inline SegmentSet segment_types(const PhonemeStream& s) {
  SegmentSet out;
  for (const auto& t : s.tokens())
    if (const auto* seg = std::get_if<IpaSegment>(&t)) out.insert(*seg);
  return out;
}

}  // namespace ipastream

template <>
struct std::hash<ipastream::IpaSegment> {
  std::size_t operator()(const ipastream::IpaSegment& s) const noexcept {
    return std::hash<std::string>{}(s.text());
  }
};
