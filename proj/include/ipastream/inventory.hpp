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

// Reference phoneme inventories (PHOIBLE-style CSV): segments, classes,
// ternary distinctive features, count profiles and best-match ranking.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ipastream/csv.hpp"
#include "ipastream/error.hpp"
#include "ipastream/ipa.hpp"
#include "ipastream/stream.hpp"

namespace ipastream {

enum class Ternary { plus, minus, unspecified };

inline std::string_view to_string(Ternary t) {
  switch (t) {
    case Ternary::plus: return "+";
    case Ternary::minus: return "-";
    case Ternary::unspecified: return "0";
  }
  return "0";
}

/// "+" and "-" are the only definite values; multi-valued cells such as
/// "+,-" and PHOIBLE's "0" are unspecified.
inline Ternary parse_ternary(std::string_view cell) {
  while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
  while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
  if (cell == "+") return Ternary::plus;
  if (cell == "-") return Ternary::minus;
  return Ternary::unspecified;
}

struct InventorySegment {
  IpaSegment segment;
  SegmentClass segment_class;
  /// Parallel to the owning inventory's feature_names().
  std::vector<Ternary> features;
};

inline bool is_diphthong(const InventorySegment& seg) {
  return seg.segment_class == SegmentClass::vowel &&
         ipa::vowel_glyph_count(seg.segment.text()) >= 2;
}

class Inventory {
 public:
  Inventory(int id, std::string language_name, std::string iso_code,
            std::shared_ptr<const std::vector<std::string>> feature_names,
            std::vector<InventorySegment> segments)
      : id_(id),
        language_name_(std::move(language_name)),
        iso_code_(std::move(iso_code)),
        feature_names_(feature_names ? std::move(feature_names)
                                     : std::make_shared<const std::vector<std::string>>()),
        segments_(std::move(segments)) {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (segments_[i].features.size() != feature_names_->size())
        throw ArgumentError("segment '" + segments_[i].segment.text() +
                            "' does not match the feature schema");
      if (!index_.emplace(segments_[i].segment, i).second)
        throw ArgumentError("duplicate segment '" + segments_[i].segment.text() +
                            "' in inventory " + std::to_string(id_));
    }
  }

  int id() const noexcept { return id_; }
  const std::string& language_name() const noexcept { return language_name_; }
  const std::string& iso_code() const noexcept { return iso_code_; }
  const std::vector<std::string>& feature_names() const noexcept { return *feature_names_; }
  const std::vector<InventorySegment>& segments() const noexcept { return segments_; }

  const InventorySegment* find(const IpaSegment& seg) const {
    auto it = index_.find(seg);
    return it == index_.end() ? nullptr : &segments_[it->second];
  }

  bool contains(const IpaSegment& seg) const { return index_.contains(seg); }

  SegmentSet segment_set() const {
    SegmentSet out;
    for (const auto& s : segments_) out.insert(s.segment);
    return out;
  }

  /// Throws LookupError for an unknown feature name.
  std::size_t feature_index(std::string_view feature) const {
    const auto& names = *feature_names_;
    auto it = std::find(names.begin(), names.end(), feature);
    if (it == names.end())
      throw LookupError("unknown feature '" + std::string(feature) + "' in inventory " +
                        std::to_string(id_));
    return static_cast<std::size_t>(it - names.begin());
  }

 private:
  int id_;
  std::string language_name_;
  std::string iso_code_;
  std::shared_ptr<const std::vector<std::string>> feature_names_;
  std::vector<InventorySegment> segments_;
  std::map<IpaSegment, std::size_t> index_;
};

/// Lookup distinguishes "absent" (LookupError) from "unspecified".
inline Ternary feature_of(const Inventory& inv, const IpaSegment& seg, std::string_view feature) {
  const std::size_t column = inv.feature_index(feature);
  const InventorySegment* found = inv.find(seg);
  if (!found)
    throw LookupError("segment '" + seg.text() + "' not in inventory " + std::to_string(inv.id()));
  return found->features[column];
}

namespace detail {

inline bool is_inventory_metadata_column(std::string_view name) {
  static constexpr std::string_view kMetadata[] = {
      "InventoryID", "Glottocode", "ISO6393",  "LanguageName", "SpecificDialect", "GlyphID",
      "Phoneme",     "Allophones", "Marginal", "SegmentClass", "Source"};
  return std::find(std::begin(kMetadata), std::end(kMetadata), name) != std::end(kMetadata);
}

inline SegmentClass parse_segment_class(std::string_view text, std::size_t line) {
  if (text == "consonant") return SegmentClass::consonant;
  if (text == "vowel") return SegmentClass::vowel;
  if (text == "tone") return SegmentClass::tone;
  throw FormatError("unknown SegmentClass '" + std::string(text) + "'", line);
}

inline int parse_inventory_id(std::string_view text, std::size_t line) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw FormatError("InventoryID '" + std::string(text) + "' is not an integer", line);
  return value;
}

}  // namespace detail

/// Reads every inventory in the file, in order of first appearance.
/// Feature columns are every column that is not PHOIBLE metadata.
inline std::vector<Inventory> load_inventories(std::istream& in) {
  csv::Reader reader(in);
  csv::Row header;
  if (!reader.next(header)) return {};

  const char* required[] = {"InventoryID", "LanguageName", "ISO6393", "Phoneme", "SegmentClass"};
  std::size_t col[5];
  for (std::size_t i = 0; i < 5; ++i) {
    col[i] = csv::column_index(header, required[i]);
    if (col[i] == static_cast<std::size_t>(-1))
      throw FormatError(std::string("inventory CSV is missing column '") + required[i] + "'", 1);
  }
  auto names = std::make_shared<std::vector<std::string>>();
  std::vector<std::size_t> feature_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!detail::is_inventory_metadata_column(header[i])) {
      names->push_back(header[i]);
      feature_cols.push_back(i);
    }
  }
  std::shared_ptr<const std::vector<std::string>> schema = names;

  struct Pending {
    int id;
    std::string language, iso;
    std::vector<InventorySegment> segments;
    std::map<IpaSegment, std::size_t> seen;  // segment -> line
  };
  std::vector<Pending> pending;
  std::map<int, std::size_t> by_id;

  csv::Row row;
  while (reader.next(row)) {
    const std::size_t line = reader.line();
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size())
      throw FormatError("expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(row.size()),
                        line);
    const int id = detail::parse_inventory_id(row[col[0]], line);
    auto [it, inserted] = by_id.emplace(id, pending.size());
    if (inserted) pending.push_back({id, row[col[1]], row[col[2]], {}, {}});
    Pending& inv = pending[it->second];

    IpaSegment segment = [&] {
      try {
        return IpaSegment(row[col[3]]);
      } catch (const ArgumentError& e) {
        throw FormatError(e.what(), line);
      }
    }();
    auto [seen_it, fresh] = inv.seen.emplace(segment, line);
    if (!fresh)
      throw FormatError("duplicate segment '" + segment.text() + "' in inventory " +
                            std::to_string(id) + " (first on line " +
                            std::to_string(seen_it->second) + ")",
                        line);
    std::vector<Ternary> features;
    features.reserve(feature_cols.size());
    for (std::size_t c : feature_cols) features.push_back(parse_ternary(row[c]));
    inv.segments.push_back(
        {std::move(segment), detail::parse_segment_class(row[col[4]], line), std::move(features)});
  }

  std::vector<Inventory> out;
  out.reserve(pending.size());
  for (auto& p : pending)
    out.emplace_back(p.id, std::move(p.language), std::move(p.iso), schema, std::move(p.segments));
  return out;
}

inline std::vector<Inventory> load_inventories(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open inventory file '" + path + "'");
  return load_inventories(in);
}

inline const Inventory& find_inventory(std::span<const Inventory> inventories, int id) {
  for (const auto& inv : inventories)
    if (inv.id() == id) return inv;
  throw LookupError("no inventory with id " + std::to_string(id));
}

struct CountProfile {
  long n_types = 0;
  long n_consonants = 0;
  long n_vowels = 0;
  long n_diphthongs = 0;
  long n_tones = 0;

  friend bool operator==(const CountProfile&, const CountProfile&) = default;
};

/// Profile of bare segments; classes inferred from glyphs.
inline CountProfile count_profile(const SegmentSet& segments) {
  CountProfile p;
  for (const auto& seg : segments) {
    ++p.n_types;
    switch (ipa::infer_class(seg.text())) {
      case SegmentClass::tone: ++p.n_tones; break;
      case SegmentClass::consonant: ++p.n_consonants; break;
      case SegmentClass::vowel:
        ++p.n_vowels;
        if (ipa::vowel_glyph_count(seg.text()) >= 2) ++p.n_diphthongs;
        break;
    }
  }
  return p;
}

/// Profile of an inventory; classes come from the data.
inline CountProfile count_profile(const Inventory& inv) {
  CountProfile p;
  for (const auto& seg : inv.segments()) {
    ++p.n_types;
    switch (seg.segment_class) {
      case SegmentClass::tone: ++p.n_tones; break;
      case SegmentClass::consonant: ++p.n_consonants; break;
      case SegmentClass::vowel:
        ++p.n_vowels;
        p.n_diphthongs += is_diphthong(seg);
        break;
    }
  }
  return p;
}

/// L1 distance over types, consonants, vowels and diphthongs.
inline long profile_distance(const CountProfile& a, const CountProfile& b) {
  return std::labs(a.n_types - b.n_types) + std::labs(a.n_consonants - b.n_consonants) +
         std::labs(a.n_vowels - b.n_vowels) + std::labs(a.n_diphthongs - b.n_diphthongs);
}

inline double jaccard(const SegmentSet& a, const SegmentSet& b) {
  std::size_t shared = 0;
  for (const auto& s : a) shared += b.contains(s);
  const std::size_t united = a.size() + b.size() - shared;
  return united == 0 ? 1.0 : static_cast<double>(shared) / static_cast<double>(united);
}

struct InventoryMatch {
  std::size_t index;  ///< position in the candidate list
  int id;
  long distance;
  double jaccard;
};

/// Full ranking: smaller profile distance, then larger Jaccard overlap, then
/// smaller inventory id.
inline std::vector<InventoryMatch> best_match(const CountProfile& observed,
                                              const SegmentSet& observed_segments,
                                              std::span<const Inventory> candidates) {
  if (candidates.empty()) throw ArgumentError("best_match needs at least one candidate inventory");
  std::vector<InventoryMatch> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Inventory& inv = candidates[i];
    ranked.push_back({i, inv.id(), profile_distance(observed, count_profile(inv)),
                      jaccard(observed_segments, inv.segment_set())});
  }
  std::sort(ranked.begin(), ranked.end(), [](const InventoryMatch& a, const InventoryMatch& b) {
    return std::tuple(a.distance, -a.jaccard, a.id) < std::tuple(b.distance, -b.jaccard, b.id);
  });
  return ranked;
}

inline std::vector<InventoryMatch> best_match(const SegmentSet& observed,
                                              std::span<const Inventory> candidates) {
  return best_match(count_profile(observed), observed, candidates);
}

}  // namespace ipastream
