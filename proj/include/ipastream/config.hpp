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

// Run configuration: a TOML-style key/value file that command-line flags
// override.
//
//   backend = "rules=data/rules/fr.rules"
//   fold_map = "data/french/fold_map.txt"
//   keep_word_boundaries = true
//   workers = 8
//
//   [columns]
//   gloss = "utterance"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "ipastream/corpus.hpp"
#include "ipastream/error.hpp"
#include "ipastream/folding.hpp"
#include "ipastream/g2p.hpp"

namespace ipastream {

using ConfigValues = std::map<std::string, std::string>;

/// Keys inside a [section] are returned as "section.key". Values may be
/// bare or double-quoted; quoted values understand \" and \\.
inline ConfigValues parse_config(std::istream& in) {
  ConfigValues values;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw FormatError("unterminated section header", line_no);
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("expected 'key = value'", line_no);
    std::string key = detail::trim(std::string_view(line).substr(0, eq));
    std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw FormatError("empty key", line_no);
    if (!value.empty() && value.front() == '"') {
      std::string unquoted;
      std::size_t i = 1;
      for (; i < value.size() && value[i] != '"'; ++i) {
        if (value[i] == '\\' && i + 1 < value.size()) ++i;
        unquoted += value[i];
      }
      if (i >= value.size()) throw FormatError("unterminated string", line_no);
      const std::string rest = detail::trim(std::string_view(value).substr(i + 1));
      if (!rest.empty() && rest.front() != '#') throw FormatError("text after string", line_no);
      value = std::move(unquoted);
    } else if (const std::size_t hash = value.find(" #"); hash != std::string::npos) {
      value = detail::trim(std::string_view(value).substr(0, hash));
    }
    values[section.empty() ? key : section + "." + key] = std::move(value);
  }
  return values;
}

inline ConfigValues load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open config file '" + path + "'");
  return parse_config(in);
}

struct RunConfig {
  std::string backend;  ///< "rules=PATH", "lexicon=PATH", "syllabary=PATH" or "passthrough"
  std::string fallback_rules;
  std::string fold_map;
  std::string inventory;
  std::optional<int> inventory_id;
  bool keep_word_boundaries = false;
  bool uncorrected = false;
  bool split_tones = false;
  std::string input;
  std::string output;
  std::string summary;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  CorpusSchema schema;
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ArgumentError("config key '" + key + "' expects true or false, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ArgumentError("config key '" + key + "' expects a number, got '" + v + "'");
  return out;
}

}  // namespace detail

/// Overlays `values` onto `config`. Unknown keys are an ArgumentError.
inline void apply_config(const ConfigValues& values, RunConfig& config) {
  for (const auto& [key, v] : values) {
    if (key == "backend") config.backend = v;
    else if (key == "fallback_rules") config.fallback_rules = v;
    else if (key == "fold_map") config.fold_map = v;
    else if (key == "inventory") config.inventory = v;
    else if (key == "inventory_id") config.inventory_id = detail::parse_number<int>(key, v);
    else if (key == "keep_word_boundaries") config.keep_word_boundaries = detail::parse_bool(key, v);
    else if (key == "uncorrected") config.uncorrected = detail::parse_bool(key, v);
    else if (key == "split_tones") config.split_tones = detail::parse_bool(key, v);
    else if (key == "input") config.input = v;
    else if (key == "output") config.output = v;
    else if (key == "summary") config.summary = v;
    else if (key == "workers") config.workers = detail::parse_number<unsigned>(key, v);
    else if (key == "seed") config.seed = detail::parse_number<std::uint64_t>(key, v);
    else if (key == "child_role") config.schema.child_role = v;
    else if (key == "columns.utterance_id") config.schema.utterance_id = v;
    else if (key == "columns.transcript_id") config.schema.transcript_id = v;
    else if (key == "columns.corpus_id") config.schema.corpus_id = v;
    else if (key == "columns.collection_id") config.schema.collection_id = v;
    else if (key == "columns.speaker_role") config.schema.speaker_role = v;
    else if (key == "columns.target_child_age") config.schema.target_child_age = v;
    else if (key == "columns.gloss") config.schema.gloss = v;
    else if (key == "columns.phonemized") config.schema.phonemized = v;
    else throw ArgumentError("unknown config key '" + key + "'");
  }
}

/// Loads the files named by the backend descriptor. split_tones is only valid for
/// syllabary backends.
inline Backend make_backend(const RunConfig& config) {
  const std::string& descriptor = config.backend;
  const std::size_t eq = descriptor.find('=');
  const std::string kind = descriptor.substr(0, eq);
  const std::string path = eq == std::string::npos ? std::string() : descriptor.substr(eq + 1);
  if (config.split_tones && kind != "syllabary")
    throw ArgumentError("--split-tones is only valid with a syllabary backend");
  auto need_path = [&] {
    if (path.empty()) throw ArgumentError("backend '" + kind + "' needs a file: " + kind + "=PATH");
  };
  auto fallback = [&]() -> std::shared_ptr<const RuleSet> {
    if (config.fallback_rules.empty()) return nullptr;
    return std::make_shared<const RuleSet>(load_rule_set(config.fallback_rules));
  };
  if (kind == "rules") {
    need_path();
    return RulesBackend{std::make_shared<const RuleSet>(load_rule_set(path))};
  }
  if (kind == "lexicon") {
    need_path();
    return LexiconBackend{std::make_shared<const Lexicon>(load_lexicon(path)), fallback()};
  }
  if (kind == "syllabary") {
    need_path();
    return SyllabaryBackend{std::make_shared<const SyllableTable>(load_syllable_table(path)),
                            config.split_tones};
  }
  if (kind == "passthrough") return PassthroughBackend{};
  if (kind.empty()) throw ArgumentError("no backend given (--backend KIND[=PATH])");
  throw ArgumentError("unknown backend '" + kind + "'");
}

/// The configured fold map, or an empty map when none is configured.
inline FoldMap make_fold_map(const RunConfig& config) {
  if (config.fold_map.empty()) return FoldMap{};
  return load_fold_map(config.fold_map);
}

}  // namespace ipastream
