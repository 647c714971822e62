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

// JSON and aligned-text renderings of the library's result types.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipastream/analysis.hpp"
#include "ipastream/corpus.hpp"
#include "ipastream/folding.hpp"
#include "ipastream/inventory.hpp"
#include "ipastream/stream.hpp"
#include "ipastream/unicode.hpp"

namespace ipastream::report {

using nlohmann::json;

inline json to_json(const SegmentSet& set) {
  json out = json::array();
  for (const auto& s : set) out.push_back(s.text());
  return out;
}

inline json to_json(const Suggestion& s) {
  return {{"unknown", s.unknown.text()},
          {"candidate", s.candidate.text()},
          {"reason", s.reason},
          {"same_class", s.same_class}};
}

inline json diff_json(const DiffReport& r, std::span<const Suggestion> suggestions) {
  json sugg = json::array();
  for (const auto& s : suggestions) sugg.push_back(to_json(s));
  return {{"unknown", to_json(r.unknown)},
          {"unseen", to_json(r.unseen)},
          {"suggestions", std::move(sugg)},
          {"n_observed", r.observed.size()},
          {"n_reference", r.reference.size()}};
}

inline json diagnostics_json(const FoldMap& map, std::span<const Diagnostic> diags) {
  json out = json::array();
  for (const auto& d : diags)
    out.push_back({{"kind", to_string(d.kind)},
                   {"rule_line", map.rules[d.rule].line},
                   {"other_line", map.rules[d.other].line},
                   {"message", d.message}});
  return out;
}

inline json summary_json(const CorpusSummary& s, std::size_t skipped_rows) {
  return {{"rows", s.rows},
          {"converted", s.converted},
          {"errors", s.errors},
          {"skipped_rows", skipped_rows},
          {"segment_tokens", s.segment_tokens},
          {"observed", to_json(s.observed)},
          {"unmapped", s.unmapped}};
}

inline json profile_json(const CountProfile& p) {
  return {{"types", p.n_types},
          {"consonants", p.n_consonants},
          {"vowels", p.n_vowels},
          {"diphthongs", p.n_diphthongs},
          {"tones", p.n_tones}};
}

inline json frequency_json(const FrequencyTable& table) {
  json out = json::object();
  for (const auto& [seg, n] : table) out[seg.text()] = n;
  return out;
}

inline json venn_json(const VennReport& v) {
  return {{"only_a", to_json(v.only_a)},
          {"both", to_json(v.both)},
          {"only_b", to_json(v.only_b)},
          {"counts",
           {{"only_a", v.only_a.size()}, {"both", v.both.size()}, {"only_b", v.only_b.size()}}}};
}

/// Display width in code points; good enough for IPA columns.
inline std::size_t display_width(std::string_view s) {
  std::size_t width = 0;
  for (char32_t c : unicode::code_points(s)) width += !unicode::is_combining_mark(c);
  return width;
}

/// Left-aligned columns separated by two spaces.
inline void write_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], display_width(row[c]));
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line.append(widths[c] - display_width(row[c]) + 2, ' ');
    }
    out << line << '\n';
  }
}

inline std::string join_set(const SegmentSet& set) {
  std::string out;
  for (const auto& s : set) {
    if (!out.empty()) out += ' ';
    out += s.text();
  }
  return out.empty() ? std::string("-") : out;
}

inline std::string format_double(double x, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

inline void write_diff_text(std::ostream& out, const DiffReport& r,
                            std::span<const Suggestion> suggestions) {
  write_table(out, {{"observed", std::to_string(r.observed.size())},
                    {"reference", std::to_string(r.reference.size())},
                    {"unknown", join_set(r.unknown)},
                    {"unseen", join_set(r.unseen)}});
  if (suggestions.empty()) return;
  out << "suggestions:\n";
  std::vector<std::vector<std::string>> rows{{"unknown", "candidate", "reason", "same_class"}};
  for (const auto& s : suggestions)
    rows.push_back({s.unknown.text(), s.candidate.text(), s.reason, s.same_class ? "yes" : "no"});
  write_table(out, rows);
}

inline void write_curve_csv(std::ostream& out, std::span<const InfoCurvePoint> curve) {
  csv::write_row(out, {"age_bucket", "mean_information", "n_utterances"});
  for (const auto& p : curve)
    csv::write_row(out, {std::to_string(p.age_bucket), format_double(p.mean_information, 9),
                         std::to_string(p.n_utterances)});
}

}  // namespace ipastream::report
