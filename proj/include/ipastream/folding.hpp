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

// Folding maps: ordered token rewrites that align a backend's phoneme set
// with a reference inventory, plus the unknown/unseen diff that drives
// their construction.
//
// Map file, one rule per line:
//
//   # Serbian affricate
//   d ʒ -> dʒ
//   n -> n̪
//   ô -> øː [orthographic]
//   ʔ -> ∅

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ipastream/error.hpp"
#include "ipastream/inventory.hpp"
#include "ipastream/ipa.hpp"
#include "ipastream/stream.hpp"
#include "ipastream/unicode.hpp"

namespace ipastream {

enum class FoldKind { one_to_one, many_to_one, merge, split, dedup, diacritic, orthographic, deletion };

inline std::string_view to_string(FoldKind k) {
  switch (k) {
    case FoldKind::one_to_one: return "one_to_one";
    case FoldKind::many_to_one: return "many_to_one";
    case FoldKind::merge: return "merge";
    case FoldKind::split: return "split";
    case FoldKind::dedup: return "dedup";
    case FoldKind::diacritic: return "diacritic";
    case FoldKind::orthographic: return "orthographic";
    case FoldKind::deletion: return "delete";
  }
  return "one_to_one";
}

inline std::optional<FoldKind> parse_fold_kind(std::string_view s) {
  for (auto k : {FoldKind::one_to_one, FoldKind::many_to_one, FoldKind::merge, FoldKind::split,
                 FoldKind::dedup, FoldKind::diacritic, FoldKind::orthographic, FoldKind::deletion})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct FoldRule {
  SegmentSeq lhs;
  SegmentSeq rhs;
  FoldKind kind;
  std::size_t line = 0;
};

struct FoldMap {
  std::vector<FoldRule> rules;
  std::string provenance;
};

/// Kind implied by the rule's shape alone.
inline FoldKind classify_fold(const SegmentSeq& lhs, const SegmentSeq& rhs) {
  if (rhs.empty()) return FoldKind::deletion;
  if (lhs.size() == 1 && rhs.size() == 1) return FoldKind::one_to_one;
  if (lhs.size() == 1) return FoldKind::split;
  if (rhs.size() > 1) return FoldKind::orthographic;

  if (std::all_of(lhs.begin(), lhs.end(), [&](const IpaSegment& s) { return s == lhs.front(); }))
    return FoldKind::dedup;
  const std::string& merged = rhs.front().text();
  const std::string& base = lhs.front().text();
  if (merged.size() > base.size() && merged.starts_with(base)) {
    const std::u32string rest = unicode::code_points(std::string_view(merged).substr(base.size()));
    if (std::all_of(rest.begin(), rest.end(), [](char32_t c) {
          return unicode::is_combining_mark(c) || unicode::is_modifier(c);
        }))
      return FoldKind::diacritic;
  }
  return FoldKind::merge;
}

/// Whether an explicit label is consistent with the rule's shape.
inline bool kind_fits_shape(FoldKind label, FoldKind shape) {
  switch (shape) {
    case FoldKind::one_to_one:
      return label == FoldKind::one_to_one || label == FoldKind::many_to_one ||
             label == FoldKind::orthographic || label == FoldKind::diacritic;
    case FoldKind::merge:
    case FoldKind::dedup:
    case FoldKind::diacritic:
      return label == FoldKind::merge || label == FoldKind::dedup ||
             label == FoldKind::diacritic || label == FoldKind::orthographic;
    case FoldKind::orthographic:
      return label == FoldKind::orthographic || label == FoldKind::diacritic;
    default:
      return label == shape;
  }
}

inline FoldMap parse_fold_map(std::istream& in, std::string provenance = {}) {
  FoldMap map;
  map.provenance = std::move(provenance);
  std::map<SegmentSeq, std::size_t> seen;  // lhs -> line
  std::vector<bool> labelled;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::vector<std::string> tokens = unicode::split_whitespace(raw);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;

    std::optional<FoldKind> label;
    if (tokens.back().size() > 2 && tokens.back().front() == '[' && tokens.back().back() == ']') {
      const std::string name = tokens.back().substr(1, tokens.back().size() - 2);
      label = parse_fold_kind(name);
      if (!label) throw FormatError("unknown rule kind '" + name + "'", line_no);
      tokens.pop_back();
    }
    auto arrow = std::find(tokens.begin(), tokens.end(), "->");
    if (arrow == tokens.end()) throw FormatError("fold rule is missing '->'", line_no);
    if (arrow == tokens.begin()) throw FormatError("fold rule has an empty left-hand side", line_no);

    FoldRule rule;
    rule.line = line_no;
    try {
      for (auto it = tokens.begin(); it != arrow; ++it) rule.lhs.emplace_back(*it);
      for (auto it = arrow + 1; it != tokens.end(); ++it)
        if (*it != "∅") rule.rhs.emplace_back(*it);
    } catch (const ArgumentError& e) {
      throw FormatError(e.what(), line_no);
    }
    if (std::count(arrow + 1, tokens.end(), "∅") && !rule.rhs.empty())
      throw FormatError("'∅' cannot be mixed with other right-hand tokens", line_no);

    auto [it, fresh] = seen.emplace(rule.lhs, line_no);
    if (!fresh)
      throw FormatError("duplicate left-hand side '" + join(rule.lhs) + "' (lines " +
                            std::to_string(it->second) + " and " + std::to_string(line_no) + ")",
                        line_no);
    const FoldKind shape = classify_fold(rule.lhs, rule.rhs);
    if (label && !kind_fits_shape(*label, shape))
      throw FormatError("kind '" + std::string(to_string(*label)) + "' does not fit rule shape '" +
                            std::string(to_string(shape)) + "'",
                        line_no);
    rule.kind = label.value_or(shape);
    labelled.push_back(label.has_value());
    map.rules.push_back(std::move(rule));
  }

  // Unlabelled one-to-one rules that share their target are many-to-one.
  std::map<IpaSegment, std::size_t> targets;
  for (const auto& r : map.rules)
    if (classify_fold(r.lhs, r.rhs) == FoldKind::one_to_one) ++targets[r.rhs.front()];
  for (std::size_t i = 0; i < map.rules.size(); ++i) {
    auto& r = map.rules[i];
    if (!labelled[i] && r.kind == FoldKind::one_to_one && targets[r.rhs.front()] > 1)
      r.kind = FoldKind::many_to_one;
  }
  return map;
}

inline FoldMap parse_fold_map(std::string_view text, std::string provenance = {}) {
  std::istringstream in{std::string(text)};
  return parse_fold_map(in, std::move(provenance));
}

inline FoldMap load_fold_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open fold map '" + path + "'");
  return parse_fold_map(in, path);
}

namespace detail {

inline bool lhs_matches(const std::vector<StreamToken>& tokens, std::size_t at,
                        const SegmentSeq& lhs) {
  if (at + lhs.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    const auto* seg = std::get_if<IpaSegment>(&tokens[at + k]);
    if (!seg || *seg != lhs[k]) return false;
  }
  return true;
}

}  // namespace detail

/// Applies one rule in a single left-to-right pass. Boundaries never take
/// part in a match. Returns the number of replacements.
inline std::size_t apply_fold_rule(const FoldRule& rule, std::vector<StreamToken>& tokens) {
  std::vector<StreamToken> out;
  out.reserve(tokens.size());
  std::size_t matches = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (detail::lhs_matches(tokens, i, rule.lhs)) {
      for (const auto& seg : rule.rhs) out.emplace_back(seg);
      i += rule.lhs.size();
      ++matches;
    } else {
      out.push_back(std::move(tokens[i++]));
    }
  }
  tokens = std::move(out);
  return matches;
}

/// Rules run in map order. `match_counts`, when given, receives the number
/// of replacements made by each rule.
inline PhonemeStream apply_fold(const FoldMap& map, const PhonemeStream& s,
                                std::vector<std::size_t>* match_counts = nullptr) {
  std::vector<StreamToken> tokens = s.tokens();
  if (match_counts) match_counts->assign(map.rules.size(), 0);
  for (std::size_t r = 0; r < map.rules.size(); ++r) {
    const std::size_t n = apply_fold_rule(map.rules[r], tokens);
    if (match_counts) (*match_counts)[r] = n;
  }
  return PhonemeStream(std::move(tokens));
}

enum class DiagnosticKind { non_confluent, overlap, deletion };

inline std::string_view to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::non_confluent: return "non_confluent";
    case DiagnosticKind::overlap: return "overlap";
    case DiagnosticKind::deletion: return "deletion";
  }
  return "overlap";
}

struct Diagnostic {
  DiagnosticKind kind;
  std::size_t rule;   ///< index into FoldMap::rules
  std::size_t other;  ///< second rule involved (== rule for single-rule findings)
  std::string message;
};

/// True if `b` can be laid over `a` at some offset with at least one
/// shared position and equal tokens wherever they overlap. Covers
/// containment and prefix/suffix overlap in both directions.
inline bool sequences_overlap(const SegmentSeq& a, const SegmentSeq& b) {
  if (a.empty() || b.empty()) return false;
  const long na = static_cast<long>(a.size());
  const long nb = static_cast<long>(b.size());
  for (long offset = -(nb - 1); offset <= na - 1; ++offset) {
    bool agree = true;
    for (long j = std::max(0L, -offset); j < nb && offset + j < na; ++j) {
      if (a[static_cast<std::size_t>(offset + j)] != b[static_cast<std::size_t>(j)]) {
        agree = false;
        break;
      }
    }
    if (agree) return true;
  }
  return false;
}

/// Warnings for maps whose result depends on rule order or on how many
/// times the map is applied. A map with no diagnostics is idempotent.
inline std::vector<Diagnostic> check_fold_map(const FoldMap& map) {
  std::vector<Diagnostic> out;
  const auto& rules = map.rules;
  auto describe = [&](std::size_t i) {
    return "'" + join(rules[i].lhs) + " -> " + join(rules[i].rhs) + "' (line " +
           std::to_string(rules[i].line) + ")";
  };
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].rhs.empty())
      out.push_back({DiagnosticKind::deletion, i, i,
                     describe(i) + " deletes segments; neighbours may form new matches"});
    for (std::size_t j = 0; j < rules.size(); ++j) {
      if (sequences_overlap(rules[i].rhs, rules[j].lhs))
        out.push_back({DiagnosticKind::non_confluent, i, j,
                       "output of " + describe(i) + " can feed " + describe(j) +
                           "; applying the map twice differs from once"});
    }
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      if (sequences_overlap(rules[i].lhs, rules[j].lhs))
        out.push_back({DiagnosticKind::overlap, i, j,
                       describe(i) + " and " + describe(j) +
                           " have overlapping inputs; results depend on rule order"});
    }
  }
  return out;
}

/// Unknown = observed \ reference, unseen = reference \ observed.
struct DiffReport {
  SegmentSet observed;
  SegmentSet reference;
  SegmentSet unknown;
  SegmentSet unseen;
};

inline DiffReport diff_inventory(const SegmentSet& observed, const SegmentSet& reference) {
  DiffReport r{observed, reference, {}, {}};
  std::set_difference(observed.begin(), observed.end(), reference.begin(), reference.end(),
                      std::inserter(r.unknown, r.unknown.end()));
  std::set_difference(reference.begin(), reference.end(), observed.begin(), observed.end(),
                      std::inserter(r.unseen, r.unseen.end()));
  return r;
}

inline DiffReport diff_inventory(const SegmentSet& observed, const Inventory& inv) {
  return diff_inventory(observed, inv.segment_set());
}

struct Suggestion {
  IpaSegment unknown;
  IpaSegment candidate;
  std::string reason;
  bool same_class;
};

/// Pairs (unknown, unseen) whose base letters agree once combining marks and
/// modifier letters are stripped: t -> tʰ, n -> n̪. Candidates whose class
/// also agrees come first. Nothing is applied.
inline std::vector<Suggestion> suggest_mappings(const DiffReport& report, const Inventory& inv) {
  std::vector<Suggestion> out;
  for (const auto& k : report.unknown) {
    const std::string k_base = ipa::strip_marks(k.text());
    if (k_base.empty()) continue;
    const SegmentClass k_class = ipa::infer_class(k.text());
    std::vector<Suggestion> mine;
    for (const auto& s : report.unseen) {
      if (ipa::strip_marks(s.text()) != k_base) continue;
      const InventorySegment* ref = inv.find(s);
      const SegmentClass s_class = ref ? ref->segment_class : ipa::infer_class(s.text());
      mine.push_back({k, s, "diacritic", s_class == k_class});
    }
    std::stable_sort(mine.begin(), mine.end(), [](const Suggestion& a, const Suggestion& b) {
      return a.same_class > b.same_class;
    });
    out.insert(out.end(), mine.begin(), mine.end());
  }
  return out;
}

}  // namespace ipastream
