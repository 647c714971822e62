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

// Rule-based G2P: pre-processor rewrite rules over graphemes, a greedy
// longest-match grapheme map, then post-processor rewrite rules over
// phoneme tokens.
//
// Rule file:
//
//   # comment
//   pre:
//   ph -> f
//   c -> s / _ e          (context: left _ right, '#' anchors a word edge)
//   map:
//   ch -> tʃ
//   x -> k s
//   h -> ∅
//   post:
//   d ʒ -> dʒ

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ipastream/error.hpp"
#include "ipastream/stream.hpp"
#include "ipastream/unicode.hpp"

namespace ipastream {

/// Units are character clusters for pre-rules and segment texts for
/// post-rules.
using UnitSeq = std::vector<std::string>;

struct ContextPattern {
  UnitSeq units;
  /// Left context: must start at the word start. Right: must end at the word end.
  bool anchored = false;

  bool empty() const { return units.empty() && !anchored; }
};

struct RewriteRule {
  UnitSeq target;
  UnitSeq replacement;
  ContextPattern left;
  ContextPattern right;
};

namespace detail {

inline bool units_match(const UnitSeq& seq, std::size_t at, const UnitSeq& pattern) {
  if (at + pattern.size() > seq.size()) return false;
  return std::equal(pattern.begin(), pattern.end(), seq.begin() + static_cast<std::ptrdiff_t>(at));
}

inline bool left_context_ok(const ContextPattern& ctx, const UnitSeq& seq, std::size_t at) {
  if (ctx.units.size() > at) return false;
  const std::size_t start = at - ctx.units.size();
  if (ctx.anchored && start != 0) return false;
  return units_match(seq, start, ctx.units);
}

inline bool right_context_ok(const ContextPattern& ctx, const UnitSeq& seq, std::size_t at) {
  if (!units_match(seq, at, ctx.units)) return false;
  return !ctx.anchored || at + ctx.units.size() == seq.size();
}

}  // namespace detail

/// One left-to-right pass, non-overlapping matches. Contexts are tested
/// against the input of the pass, not against rewritten material.
inline UnitSeq apply_rewrite(const RewriteRule& rule, const UnitSeq& seq) {
  UnitSeq out;
  out.reserve(seq.size());
  std::size_t i = 0;
  while (i < seq.size()) {
    if (detail::units_match(seq, i, rule.target) && detail::left_context_ok(rule.left, seq, i) &&
        detail::right_context_ok(rule.right, seq, i + rule.target.size())) {
      out.insert(out.end(), rule.replacement.begin(), rule.replacement.end());
      i += rule.target.size();
    } else {
      out.push_back(seq[i++]);
    }
  }
  return out;
}

/// Grapheme strings to segments. Longest grapheme wins; equal lengths go to
/// the entry that came first in the file.
class GraphemeMap {
 public:
  struct Entry {
    UnitSeq graphemes;  ///< character clusters
    SegmentSeq segments;
  };

  GraphemeMap() = default;

  explicit GraphemeMap(std::vector<Entry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].graphemes.empty()) throw ArgumentError("empty grapheme in map");
      by_first_[entries_[i].graphemes.front()].push_back(i);
    }
    for (auto& [first, candidates] : by_first_) {
      std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        return entries_[a].graphemes.size() > entries_[b].graphemes.size();
      });
    }
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  /// Entry matching at `at`, or nullptr.
  const Entry* longest_match(const UnitSeq& clusters, std::size_t at) const {
    auto it = by_first_.find(clusters[at]);
    if (it == by_first_.end()) return nullptr;
    for (std::size_t index : it->second)
      if (detail::units_match(clusters, at, entries_[index].graphemes)) return &entries_[index];
    return nullptr;
  }

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::vector<std::size_t>> by_first_;
};

struct RuleSet {
  std::vector<RewriteRule> pre_rules;
  GraphemeMap map;
  std::vector<RewriteRule> post_rules;
};

struct RuleOutput {
  SegmentSeq segments;
  /// Clusters that no map entry covered; they pass through as segments.
  std::set<std::string> unmapped;
};

inline RuleOutput convert_rules(const RuleSet& rs, std::string_view word) {
  UnitSeq clusters = unicode::clusters(unicode::nfd(word));
  for (const auto& rule : rs.pre_rules) {
    clusters = apply_rewrite(rule, clusters);
    std::string joined;
    for (const auto& c : clusters) joined += c;
    clusters = unicode::clusters(joined);
  }

  RuleOutput result;
  UnitSeq phones;
  std::size_t i = 0;
  while (i < clusters.size()) {
    if (const auto* entry = rs.map.longest_match(clusters, i)) {
      for (const auto& seg : entry->segments) phones.push_back(seg.text());
      i += entry->graphemes.size();
    } else {
      result.unmapped.insert(clusters[i]);
      phones.push_back(clusters[i]);
      ++i;
    }
  }

  for (const auto& rule : rs.post_rules) phones = apply_rewrite(rule, phones);
  result.segments.reserve(phones.size());
  for (const auto& p : phones) result.segments.emplace_back(p);
  return result;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  auto begin = std::find_if(s.begin(), s.end(), not_space);
  auto end = std::find_if(s.rbegin(), std::string_view::reverse_iterator(begin), not_space).base();
  return std::string(begin, end);
}

inline bool is_empty_marker(const std::vector<std::string>& tokens) {
  return tokens.empty() || (tokens.size() == 1 && tokens[0] == "∅");
}

/// Grapheme-side tokens are concatenated and re-split into clusters, so
/// "c h" and "ch" are the same pattern.
inline UnitSeq grapheme_units(const std::vector<std::string>& tokens) {
  if (is_empty_marker(tokens)) return {};
  std::string joined;
  for (const auto& t : tokens) joined += t;
  return unicode::clusters(unicode::nfd(joined));
}

inline UnitSeq segment_units(const std::vector<std::string>& tokens) {
  if (is_empty_marker(tokens)) return {};
  UnitSeq out;
  for (const auto& t : tokens) out.push_back(IpaSegment(t).text());
  return out;
}

struct RuleLine {
  std::vector<std::string> lhs, rhs, left, right;
  bool has_context = false;
  bool left_anchored = false;
  bool right_anchored = false;
};

inline RuleLine split_rule_line(std::string_view line, std::size_t line_no) {
  const std::size_t arrow = line.find("->");
  if (arrow == std::string_view::npos) throw FormatError("rule is missing '->'", line_no);
  RuleLine r;
  r.lhs = unicode::split_whitespace(line.substr(0, arrow));
  std::vector<std::string> rest = unicode::split_whitespace(line.substr(arrow + 2));
  auto slash = std::find(rest.begin(), rest.end(), "/");
  r.rhs.assign(rest.begin(), slash);
  if (slash != rest.end()) {
    r.has_context = true;
    std::vector<std::string> ctx(slash + 1, rest.end());
    auto underscore = std::find(ctx.begin(), ctx.end(), "_");
    if (underscore == ctx.end()) throw FormatError("context is missing '_'", line_no);
    r.left.assign(ctx.begin(), underscore);
    r.right.assign(underscore + 1, ctx.end());
    if (std::find(underscore + 1, ctx.end(), "_") != ctx.end())
      throw FormatError("context has more than one '_'", line_no);
    if (!r.left.empty() && r.left.front().starts_with('#')) {
      r.left_anchored = true;
      r.left.front().erase(0, 1);
      if (r.left.front().empty()) r.left.erase(r.left.begin());
    }
    if (!r.right.empty() && r.right.back().ends_with('#')) {
      r.right_anchored = true;
      r.right.back().pop_back();
      if (r.right.back().empty()) r.right.pop_back();
    }
  }
  if (r.lhs.empty()) throw FormatError("rule has an empty left-hand side", line_no);
  return r;
}

}  // namespace detail

inline RuleSet parse_rule_set(std::istream& in) {
  enum class Section { pre, map, post } section = Section::map;
  RuleSet rs;
  std::vector<GraphemeMap::Entry> entries;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line == "pre:") { section = Section::pre; continue; }
    if (line == "map:") { section = Section::map; continue; }
    if (line == "post:") { section = Section::post; continue; }

    detail::RuleLine r = detail::split_rule_line(line, line_no);
    try {
      if (section == Section::map) {
        if (r.has_context) throw FormatError("map entries take no context", line_no);
        GraphemeMap::Entry entry{detail::grapheme_units(r.lhs), {}};
        if (!detail::is_empty_marker(r.rhs))
          for (const auto& t : r.rhs) entry.segments.emplace_back(t);
        entries.push_back(std::move(entry));
        continue;
      }
      const bool pre = section == Section::pre;
      auto units = [&](const std::vector<std::string>& tokens) {
        return pre ? detail::grapheme_units(tokens) : detail::segment_units(tokens);
      };
      RewriteRule rule{units(r.lhs), units(r.rhs), {units(r.left), r.left_anchored},
                       {units(r.right), r.right_anchored}};
      if (rule.target.empty()) throw FormatError("rule has an empty target", line_no);
      (pre ? rs.pre_rules : rs.post_rules).push_back(std::move(rule));
    } catch (const ArgumentError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  rs.map = GraphemeMap(std::move(entries));
  return rs;
}

inline RuleSet parse_rule_set(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_rule_set(in);
}

inline RuleSet load_rule_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open rule file '" + path + "'");
  return parse_rule_set(in);
}

}  // namespace ipastream
