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

// The `ipastream` command line. Everything is reachable through run(), which
// takes explicit streams so the commands can be driven from tests.
//
// Exit codes: 0 success, 1 data problem (row errors, inventory mismatch,
// map diagnostics), 2 usage or configuration error.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipastream/analysis.hpp"
#include "ipastream/config.hpp"
#include "ipastream/corpus.hpp"
#include "ipastream/folding.hpp"
#include "ipastream/g2p.hpp"
#include "ipastream/inventory.hpp"
#include "ipastream/report.hpp"
#include "ipastream/stream.hpp"

namespace ipastream::cli {

/// Default inventory file when --inventory is not given.
inline constexpr const char* kInventoryEnv = "IPASTREAM_INVENTORY";

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Opens `path` for reading, or hands back stdin for "" and "-".
class InputFile {
 public:
  InputFile(const std::string& path, std::istream& stdin_stream) {
    if (path.empty() || path == "-") {
      stream_ = &stdin_stream;
    } else {
      file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*file_) throw ArgumentError("cannot open '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& stdout_stream) {
    if (path.empty() || path == "-") {
      stream_ = &stdout_stream;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ArgumentError("cannot create '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

inline bool getline_stripped(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

enum class Speakers { all, child, adult };

/// Phoneme streams from a stream-text file (one utterance per line) or a
/// CSV with a phonemized column.
inline std::vector<PhonemeStream> load_streams(const std::string& path, Io& io,
                                               const CorpusSchema& schema,
                                               Speakers speakers = Speakers::all) {
  InputFile input(path, io.in);
  std::vector<PhonemeStream> streams;
  if (!ends_with(path, ".csv")) {
    if (speakers != Speakers::all)
      throw ArgumentError("speaker filtering needs a corpus CSV input");
    std::string line;
    while (getline_stripped(input.get(), line)) streams.push_back(parse_stream(line));
    return streams;
  }
  csv::Reader reader(input.get());
  csv::Row header;
  if (!reader.next(header)) return streams;
  const std::size_t npos = static_cast<std::size_t>(-1);
  const std::size_t phon = csv::column_index(header, schema.phonemized);
  if (phon == npos) throw FormatError("CSV has no '" + schema.phonemized + "' column", 1);
  const std::size_t is_child = csv::column_index(header, kIsChildColumn);
  const std::size_t role = csv::column_index(header, schema.speaker_role);
  if (speakers != Speakers::all && is_child == npos && role == npos)
    throw ArgumentError("speaker filtering needs an is_child or speaker column");
  csv::Row row;
  while (reader.next(row)) {
    if (row.size() != header.size()) continue;
    if (speakers != Speakers::all) {
      const bool child =
          is_child != npos ? row[is_child] == "true" : row[role] == schema.child_role;
      if (child != (speakers == Speakers::child)) continue;
    }
    streams.push_back(parse_stream(row[phon]));
  }
  return streams;
}

/// Observed segment set: a summary JSON ("observed" array) is taken as is;
/// streams are folded first unless `fold` is null.
inline SegmentSet load_observed(const std::string& path, Io& io, const CorpusSchema& schema,
                                const FoldMap* fold) {
  if (ends_with(path, ".json")) {
    InputFile input(path, io.in);
    const nlohmann::json doc = nlohmann::json::parse(input.get());
    if (!doc.contains("observed") || !doc["observed"].is_array())
      throw FormatError("summary JSON has no 'observed' array");
    SegmentSet out;
    for (const auto& s : doc["observed"]) out.emplace(s.get<std::string>());
    return out;
  }
  SegmentSet out;
  for (const auto& s : load_streams(path, io, schema)) {
    const SegmentSet types = segment_types(fold ? apply_fold(*fold, s) : s);
    out.insert(types.begin(), types.end());
  }
  return out;
}

inline std::vector<Inventory> load_inventory_file(const RunConfig& cfg) {
  std::string path = cfg.inventory;
  if (path.empty())
    if (const char* env = std::getenv(kInventoryEnv)) path = env;
  if (path.empty())
    throw ArgumentError(std::string("no inventory file (--inventory or $") + kInventoryEnv + ")");
  return load_inventories(path);
}

inline const Inventory& selected_inventory(const std::vector<Inventory>& inventories,
                                           const RunConfig& cfg) {
  if (!cfg.inventory_id) throw ArgumentError("--inventory-id is required");
  return find_inventory(inventories, *cfg.inventory_id);
}

/// Options bound to a scratch RunConfig; after parsing, only the options
/// that were given are copied over the config-file values.
class Flags {
 public:
  template <typename T>
  CLI::Option* option(CLI::App* app, const std::string& name, T RunConfig::*member,
                      const std::string& help) {
    CLI::Option* opt = app->add_option(name, scratch_.*member, help);
    setters_.emplace_back(opt, [this, member](RunConfig& c) { c.*member = scratch_.*member; });
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool RunConfig::*member,
                    const std::string& help) {
    CLI::Option* opt = app->add_flag(name, scratch_.*member, help);
    setters_.emplace_back(opt, [this, member](RunConfig& c) { c.*member = scratch_.*member; });
    return opt;
  }

  CLI::Option* inventory_id(CLI::App* app) {
    CLI::Option* opt = app->add_option("--inventory-id", scratch_id_, "inventory id to use");
    setters_.emplace_back(opt, [this](RunConfig& c) { c.inventory_id = scratch_id_; });
    return opt;
  }

  CLI::Option* column(CLI::App* app) {
    CLI::Option* opt = app->add_option("--column", columns_,
                                       "column mapping FIELD=NAME (e.g. gloss=utterance)");
    setters_.emplace_back(opt, [this](RunConfig& c) {
      ConfigValues values;
      for (const auto& m : columns_) {
        const auto eq = m.find('=');
        if (eq == std::string::npos) throw ArgumentError("--column expects FIELD=NAME");
        values["columns." + m.substr(0, eq)] = m.substr(eq + 1);
      }
      apply_config(values, c);
    });
    return opt;
  }

  CLI::Option* child_role(CLI::App* app) {
    CLI::Option* opt = app->add_option("--child-role", child_role_, "speaker code of the child");
    setters_.emplace_back(opt, [this](RunConfig& c) { c.schema.child_role = child_role_; });
    return opt;
  }

  RunConfig resolve(const std::string& config_path) const {
    RunConfig cfg;
    if (!config_path.empty()) apply_config(load_config(config_path), cfg);
    for (const auto& [opt, set] : setters_)
      if (opt->count() > 0) set(cfg);
    return cfg;
  }

 private:
  RunConfig scratch_;
  int scratch_id_ = 0;
  std::vector<std::string> columns_;
  std::string child_role_;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters_;
};

inline void add_backend_options(CLI::App* app, Flags& flags) {
  flags.option(app, "--backend,-b", &RunConfig::backend,
               "rules=PATH | lexicon=PATH | syllabary=PATH | passthrough");
  flags.option(app, "--fallback-rules", &RunConfig::fallback_rules,
               "rule file used for lexicon misses");
  flags.flag(app, "--keep_word_boundaries,--keep-word-boundaries",
             &RunConfig::keep_word_boundaries, "emit WORD_BOUNDARY between words");
  flags.flag(app, "--split-tones,--split_tones", &RunConfig::split_tones,
             "emit tones as separate tokens (syllabary backends)");
}

inline void add_fold_options(CLI::App* app, Flags& flags) {
  flags.option(app, "--fold-map,-m", &RunConfig::fold_map, "folding map file");
  flags.flag(app, "--uncorrected", &RunConfig::uncorrected, "skip folding");
}

inline void write_unmapped(std::ostream& err, const UnmappedCounts& unmapped) {
  if (unmapped.empty()) return;
  err << "unmapped characters:";
  for (const auto& [ch, n] : unmapped) err << ' ' << ch << " (" << n << ')';
  err << '\n';
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_convert(const RunConfig& cfg, Io& io) {
  const Backend backend = make_backend(cfg);
  const FoldMap fold = cfg.uncorrected ? FoldMap{} : make_fold_map(cfg);
  InputFile input(cfg.input, io.in);
  OutputFile output(cfg.output, io.out);
  UnmappedCounts unmapped;
  bool failed = false;
  std::string line;
  for (std::size_t index = 0; getline_stripped(input.get(), line); ++index) {
    try {
      PhonemeStream s = convert_utterance(backend, line, cfg.keep_word_boundaries, index, &unmapped);
      if (!cfg.uncorrected) s = apply_fold(fold, s);
      output.get() << emit_stream(s, cfg.keep_word_boundaries) << '\n';
    } catch (const Error& e) {
      output.get() << '\n';
      io.err << "line " << index + 1 << ": " << e.what() << '\n';
      failed = true;
    }
  }
  write_unmapped(io.err, unmapped);
  return failed ? kDataError : kOk;
}

struct ValidateArgs {
  std::vector<std::string> allow;
  bool json = false;
};

inline int cmd_validate(const RunConfig& cfg, const ValidateArgs& args, Io& io) {
  const std::vector<Inventory> inventories = load_inventory_file(cfg);
  const Inventory& inv = selected_inventory(inventories, cfg);
  const FoldMap fold = cfg.uncorrected ? FoldMap{} : make_fold_map(cfg);
  const SegmentSet observed = load_observed(cfg.input, io, cfg.schema, &fold);
  const DiffReport diff = diff_inventory(observed, inv);
  const std::vector<Suggestion> suggestions = suggest_mappings(diff, inv);

  SegmentSet allowed;
  for (const auto& a : args.allow)
    for (const auto& piece : unicode::split_whitespace(a)) {
      std::size_t start = 0;
      while (start <= piece.size()) {
        const std::size_t comma = piece.find(',', start);
        const std::string item = piece.substr(start, comma - start);
        if (!item.empty()) allowed.emplace(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
  auto residual = [&](const SegmentSet& set) {
    return std::any_of(set.begin(), set.end(), [&](const IpaSegment& s) { return !allowed.contains(s); });
  };
  const bool aligned = !residual(diff.unknown) && !residual(diff.unseen);

  if (args.json) {
    nlohmann::json doc = report::diff_json(diff, suggestions);
    doc["inventory_id"] = inv.id();
    doc["allowed"] = report::to_json(allowed);
    doc["aligned"] = aligned;
    io.out << doc.dump(2) << '\n';
  } else {
    io.out << "inventory  " << inv.id() << " (" << inv.language_name() << ")\n";
    report::write_diff_text(io.out, diff, suggestions);
  }
  return aligned ? kOk : kDataError;
}

struct MatchArgs {
  std::size_t top = 10;
  bool json = false;
};

inline int cmd_match(const RunConfig& cfg, const MatchArgs& args, Io& io) {
  const std::vector<Inventory> inventories = load_inventory_file(cfg);
  if (inventories.empty()) throw ArgumentError("inventory file has no inventories");
  const FoldMap fold = cfg.uncorrected ? FoldMap{} : make_fold_map(cfg);
  const SegmentSet observed = load_observed(cfg.input, io, cfg.schema, &fold);
  const CountProfile profile = count_profile(observed);
  const auto ranked = best_match(profile, observed, inventories);
  const std::size_t shown = std::min(args.top, ranked.size());

  if (args.json) {
    nlohmann::json doc{{"observed_profile", report::profile_json(profile)}, {"ranking", nlohmann::json::array()}};
    for (std::size_t r = 0; r < shown; ++r) {
      const Inventory& inv = inventories[ranked[r].index];
      doc["ranking"].push_back({{"rank", r + 1},
                                {"inventory_id", inv.id()},
                                {"language", inv.language_name()},
                                {"iso", inv.iso_code()},
                                {"distance", ranked[r].distance},
                                {"jaccard", ranked[r].jaccard},
                                {"profile", report::profile_json(count_profile(inv))}});
    }
    io.out << doc.dump(2) << '\n';
    return kOk;
  }
  std::vector<std::vector<std::string>> rows{
      {"rank", "id", "language", "iso", "distance", "jaccard", "types", "cons", "vowels", "diph"}};
  rows.push_back({"-", "observed", "", "", "", "", std::to_string(profile.n_types),
                  std::to_string(profile.n_consonants), std::to_string(profile.n_vowels),
                  std::to_string(profile.n_diphthongs)});
  for (std::size_t r = 0; r < shown; ++r) {
    const Inventory& inv = inventories[ranked[r].index];
    const CountProfile p = count_profile(inv);
    rows.push_back({std::to_string(r + 1), std::to_string(inv.id()), inv.language_name(),
                    inv.iso_code(), std::to_string(ranked[r].distance),
                    report::format_double(ranked[r].jaccard, 4), std::to_string(p.n_types),
                    std::to_string(p.n_consonants), std::to_string(p.n_vowels),
                    std::to_string(p.n_diphthongs)});
  }
  report::write_table(io.out, rows);
  return kOk;
}

struct CorpusArgs {
  bool sort_by_age = false;
};

inline int cmd_corpus(const RunConfig& cfg, const CorpusArgs& args, Io& io) {
  const Backend backend = make_backend(cfg);
  const FoldMap fold = cfg.uncorrected ? FoldMap{} : make_fold_map(cfg);
  CorpusTable table = [&] {
    InputFile input(cfg.input, io.in);
    return read_corpus(input.get(), cfg.schema);
  }();
  for (const auto& skipped : table.skipped)
    io.err << "line " << skipped.line << ": skipped: " << skipped.message << '\n';

  ConvertOptions options{cfg.keep_word_boundaries, cfg.uncorrected, cfg.workers};
  const CorpusSummary summary = convert_corpus(table.records, backend, &fold, options);
  if (args.sort_by_age) sort_by_age(table.records);

  OutputFile output(cfg.output, io.out);
  write_corpus(output.get(), table);
  if (!cfg.summary.empty()) {
    OutputFile summary_file(cfg.summary, io.out);
    summary_file.get() << report::summary_json(summary, table.skipped.size()).dump(2) << '\n';
  }
  io.err << summary.rows << " rows, " << summary.errors << " errors, " << table.skipped.size()
         << " skipped\n";
  write_unmapped(io.err, summary.unmapped);
  return summary.errors > 0 ? kDataError : kOk;
}

struct StatsArgs {
  bool json = false;
  std::string speakers = "all";
  std::string compare;
  std::size_t min_each = 4;
  std::vector<long> binomial;  ///< k n
  double p0 = 0.5;
  std::string vectors;
  std::string label_column = "label";
};

inline Speakers parse_speakers(const std::string& s) {
  if (s == "all") return Speakers::all;
  if (s == "child") return Speakers::child;
  if (s == "adult") return Speakers::adult;
  throw ArgumentError("--speakers expects all, child or adult");
}

inline int cmd_stats(const RunConfig& cfg, const StatsArgs& args, Io& io) {
  nlohmann::json doc = nlohmann::json::object();
  std::ostringstream text;

  const bool has_input = !cfg.input.empty() || (args.binomial.empty() && args.vectors.empty());
  SegmentSet types;
  if (has_input) {
    const auto streams = load_streams(cfg.input, io, cfg.schema, parse_speakers(args.speakers));
    const FrequencyTable freq = frequency_table(streams);
    std::size_t total = 0;
    for (const auto& [seg, n] : freq) {
      total += n;
      types.insert(seg);
    }
    std::vector<std::pair<IpaSegment, std::size_t>> sorted(freq.begin(), freq.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    doc["utterances"] = streams.size();
    doc["tokens"] = total;
    doc["types"] = freq.size();
    doc["frequencies"] = report::frequency_json(freq);
    doc["profile"] = report::profile_json(count_profile(types));
    std::vector<std::vector<std::string>> rows{{"segment", "count", "relative"}};
    for (const auto& [seg, n] : sorted)
      rows.push_back({seg.text(), std::to_string(n),
                      report::format_double(static_cast<double>(n) / static_cast<double>(total))});
    text << streams.size() << " utterances, " << total << " tokens, " << freq.size() << " types\n";
    report::write_table(text, rows);
  }

  if (!args.compare.empty()) {
    const SegmentSet other = load_observed(args.compare, io, cfg.schema, nullptr);
    const VennReport venn = compare_inventories(types, other);
    doc["compare"] = report::venn_json(venn);
    text << "comparison with " << args.compare << ":\n";
    report::write_table(text, {{"only_input", std::to_string(venn.only_a.size()), report::join_set(venn.only_a)},
                               {"both", std::to_string(venn.both.size()), report::join_set(venn.both)},
                               {"only_other", std::to_string(venn.only_b.size()), report::join_set(venn.only_b)}});
  }

  if (cfg.inventory_id) {
    const std::vector<Inventory> inventories = load_inventory_file(cfg);
    const Inventory& inv = selected_inventory(inventories, cfg);
    const std::vector<std::string> eligible = eligible_features(inv, args.min_each);
    nlohmann::json features = nlohmann::json::array();
    std::vector<std::vector<std::string>> rows{{"feature", "plus", "minus", "eligible"}};
    for (const auto& c : feature_counts(inv)) {
      const bool ok = std::find(eligible.begin(), eligible.end(), c.feature) != eligible.end();
      features.push_back({{"feature", c.feature}, {"plus", c.plus}, {"minus", c.minus}, {"eligible", ok}});
      rows.push_back({c.feature, std::to_string(c.plus), std::to_string(c.minus), ok ? "yes" : "no"});
    }
    doc["features"] = features;
    doc["eligible_features"] = eligible;
    text << "features of inventory " << inv.id() << " (min " << args.min_each << " each):\n";
    report::write_table(text, rows);
  }

  if (!args.binomial.empty()) {
    if (args.binomial.size() != 2) throw ArgumentError("--binomial expects K N");
    const double p = binomial_test(args.binomial[0], args.binomial[1], args.p0);
    doc["binomial"] = {{"k", args.binomial[0]}, {"n", args.binomial[1]}, {"p0", args.p0}, {"p_value", p}};
    text << "binomial k=" << args.binomial[0] << " n=" << args.binomial[1] << " p0=" << args.p0
         << "  p=" << report::format_double(p, 12) << '\n';
  }

  if (!args.vectors.empty()) {
    InputFile input(args.vectors, io.in);
    const LabeledVectorSet set = load_labeled_vectors(input.get(), args.label_column);
    const double score = silhouette(set);
    doc["silhouette"] = {{"n", set.vectors.size()}, {"mean", score}};
    text << "silhouette n=" << set.vectors.size() << "  mean=" << report::format_double(score, 9) << '\n';
  }

  OutputFile output(cfg.output, io.out);
  if (args.json)
    output.get() << doc.dump(2) << '\n';
  else
    output.get() << text.str();
  return kOk;
}

struct InfoArgs {
  bool per_bucket = false;
  bool include_children = false;
  std::optional<std::size_t> sample_size;
};

inline int cmd_info(const RunConfig& cfg, const InfoArgs& args, Io& io) {
  CorpusTable table = [&] {
    InputFile input(cfg.input, io.in);
    return read_corpus(input.get(), cfg.schema);
  }();
  std::vector<UtteranceRecord> selected;
  for (auto& rec : table.records)
    if (args.include_children || !rec.is_child) selected.push_back(std::move(rec));
  InfoOptions options{!args.per_bucket, args.sample_size, cfg.seed};
  const auto curve = info_by_age(selected, options);
  OutputFile output(cfg.output, io.out);
  report::write_curve_csv(output.get(), curve);
  return kOk;
}

struct CheckMapArgs {
  bool json = false;
};

inline int cmd_check_map(const RunConfig& cfg, const CheckMapArgs& args, Io& io) {
  if (cfg.fold_map.empty()) throw ArgumentError("no fold map given");
  const FoldMap map = load_fold_map(cfg.fold_map);
  const auto diags = check_fold_map(map);
  if (args.json) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : map.rules)
      rules.push_back({{"line", r.line}, {"lhs", join(r.lhs)}, {"rhs", join(r.rhs)}, {"kind", to_string(r.kind)}});
    io.out << nlohmann::json{{"rules", rules}, {"diagnostics", report::diagnostics_json(map, diags)}}.dump(2)
           << '\n';
  } else {
    std::vector<std::vector<std::string>> rows{{"line", "kind", "rule"}};
    for (const auto& r : map.rules)
      rows.push_back({std::to_string(r.line), std::string(to_string(r.kind)),
                      join(r.lhs) + " -> " + (r.rhs.empty() ? std::string("∅") : join(r.rhs))});
    report::write_table(io.out, rows);
    for (const auto& d : diags) io.out << "warning[" << to_string(d.kind) << "]: " << d.message << '\n';
    if (diags.empty()) io.out << "no diagnostics\n";
  }
  return diags.empty() ? kOk : kDataError;
}

inline int cmd_suggest(const RunConfig& cfg, bool json, Io& io) {
  const std::vector<Inventory> inventories = load_inventory_file(cfg);
  const Inventory& inv = selected_inventory(inventories, cfg);
  const FoldMap fold = cfg.uncorrected ? FoldMap{} : make_fold_map(cfg);
  const DiffReport diff = diff_inventory(load_observed(cfg.input, io, cfg.schema, &fold), inv);
  const auto suggestions = suggest_mappings(diff, inv);
  if (json) {
    io.out << report::diff_json(diff, suggestions).dump(2) << '\n';
    return kOk;
  }
  std::vector<std::vector<std::string>> rows{{"unknown", "candidate", "reason", "same_class"}};
  for (const auto& s : suggestions)
    rows.push_back({s.unknown.text(), s.candidate.text(), s.reason, s.same_class ? "yes" : "no"});
  report::write_table(io.out, rows);
  return kOk;
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  using namespace detail;
  Io io{in, out, err};
  CLI::App app{"Grapheme-to-phoneme conversion, folding and phonological statistics", "ipastream"};
  app.require_subcommand(1);
  std::string config_path;
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config_path, "TOML-style key/value config file");
  };
  auto io_options = [&](CLI::App* sub) {
    flags.option(sub, "--input,-i", &RunConfig::input, "input file ('-' for stdin)");
    flags.option(sub, "--output,-o", &RunConfig::output, "output file (default stdout)");
  };
  auto inventory_options = [&](CLI::App* sub) {
    flags.option(sub, "--inventory", &RunConfig::inventory,
                 std::string("inventory CSV (default $") + kInventoryEnv + ")");
    flags.inventory_id(sub);
  };
  auto schema_options = [&](CLI::App* sub) {
    flags.column(sub);
    flags.child_role(sub);
  };

  CLI::App* convert = app.add_subcommand("convert", "convert text lines to phoneme streams");
  common(convert);
  io_options(convert);
  add_backend_options(convert, flags);
  add_fold_options(convert, flags);

  ValidateArgs validate_args;
  CLI::App* validate = app.add_subcommand("validate", "diff observed phonemes against an inventory");
  common(validate);
  flags.option(validate, "--observed,--input,-i", &RunConfig::input,
               "streams (.txt), corpus (.csv) or summary (.json)");
  inventory_options(validate);
  add_fold_options(validate, flags);
  schema_options(validate);
  validate->add_option("--allow", validate_args.allow, "segments accepted as residual (comma separated)");
  validate->add_flag("--json", validate_args.json, "JSON output");

  MatchArgs match_args;
  CLI::App* match = app.add_subcommand("match", "rank inventories against observed phonemes");
  common(match);
  flags.option(match, "--observed,--input,-i", &RunConfig::input, "observed streams, corpus or summary");
  flags.option(match, "--inventory", &RunConfig::inventory, "inventory CSV");
  add_fold_options(match, flags);
  schema_options(match);
  match->add_option("--top,-k", match_args.top, "number of inventories to show");
  match->add_flag("--json", match_args.json, "JSON output");

  CorpusArgs corpus_args;
  CLI::App* corpus = app.add_subcommand("corpus", "convert a corpus CSV");
  common(corpus);
  io_options(corpus);
  add_backend_options(corpus, flags);
  add_fold_options(corpus, flags);
  schema_options(corpus);
  flags.option(corpus, "--workers,-j", &RunConfig::workers, "conversion threads");
  flags.option(corpus, "--summary", &RunConfig::summary, "write a JSON run summary here");
  corpus->add_flag("--sort-by-age", corpus_args.sort_by_age, "sort output rows by child age");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "frequencies, inventory comparison, features, tests");
  common(stats);
  io_options(stats);
  inventory_options(stats);
  schema_options(stats);
  stats->add_flag("--json", stats_args.json, "JSON output");
  stats->add_option("--speakers", stats_args.speakers, "all, child or adult (corpus CSV input)");
  stats->add_option("--compare", stats_args.compare, "second stream/corpus/summary file to compare with");
  stats->add_option("--min-each", stats_args.min_each, "feature eligibility threshold");
  stats->add_option("--binomial", stats_args.binomial, "K N: upper-tail binomial test")->expected(2);
  stats->add_option("--p0", stats_args.p0, "null success probability");
  stats->add_option("--vectors", stats_args.vectors, "labelled vector CSV for the silhouette score");
  stats->add_option("--label-column", stats_args.label_column, "label column of --vectors");

  InfoArgs info_args;
  std::size_t sample_size = 0;
  CLI::App* info = app.add_subcommand("info", "mean unigram utterance information by child age");
  common(info);
  io_options(info);
  schema_options(info);
  flags.option(info, "--seed", &RunConfig::seed, "sampling seed");
  CLI::Option* sample_opt = info->add_option("--sample-size", sample_size, "utterances per age bucket");
  info->add_flag("--per-bucket", info_args.per_bucket, "fit one unigram model per bucket");
  info->add_flag("--include-children", info_args.include_children, "keep child-produced utterances");

  CheckMapArgs check_args;
  CLI::App* check = app.add_subcommand("check-map", "list rules and warn about order/idempotence hazards");
  common(check);
  flags.option(check, "fold_map,--fold-map,-m", &RunConfig::fold_map, "folding map file");
  check->add_flag("--json", check_args.json, "JSON output");

  bool suggest_json = false;
  CLI::App* suggest = app.add_subcommand("suggest", "propose fold rules for unknown phonemes");
  common(suggest);
  flags.option(suggest, "--observed,--input,-i", &RunConfig::input, "observed streams, corpus or summary");
  inventory_options(suggest);
  add_fold_options(suggest, flags);
  schema_options(suggest);
  suggest->add_flag("--json", suggest_json, "JSON output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  RunConfig cfg;
  try {
    cfg = flags.resolve(config_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  if (sample_opt->count() > 0) info_args.sample_size = sample_size;

  try {
    if (convert->parsed()) return cmd_convert(cfg, io);
    if (validate->parsed()) return cmd_validate(cfg, validate_args, io);
    if (match->parsed()) return cmd_match(cfg, match_args, io);
    if (corpus->parsed()) return cmd_corpus(cfg, corpus_args, io);
    if (stats->parsed()) return cmd_stats(cfg, stats_args, io);
    if (info->parsed()) return cmd_info(cfg, info_args, io);
    if (check->parsed()) return cmd_check_map(cfg, check_args, io);
    if (suggest->parsed()) return cmd_suggest(cfg, suggest_json, io);
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace ipastream::cli
