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

// CHILDES-style utterance CSV: ingestion, parallel order-preserving
// conversion, and output with every source column passed through.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "ipastream/csv.hpp"
#include "ipastream/error.hpp"
#include "ipastream/folding.hpp"
#include "ipastream/g2p.hpp"
#include "ipastream/stream.hpp"

namespace ipastream {

inline constexpr double kDaysPerMonth = 30.44;

/// "Y;MM.DD" to months. Months and days may be omitted ("2;", "1;06",
/// "1;06."). Anything else is absent rather than an error.
inline std::optional<double> parse_age(std::string_view text) {
  auto number = [](std::string_view s, bool allow_empty) -> std::optional<int> {
    if (s.empty()) return allow_empty ? std::optional<int>(0) : std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) return std::nullopt;
    return v;
  };
  const std::size_t semi = text.find(';');
  if (semi == std::string_view::npos) return std::nullopt;
  const auto years = number(text.substr(0, semi), false);
  std::string_view rest = text.substr(semi + 1);
  const std::size_t dot = rest.find('.');
  const auto months = number(rest.substr(0, dot), true);
  const auto days =
      dot == std::string_view::npos ? std::optional<int>(0) : number(rest.substr(dot + 1), true);
  if (!years || !months || !days || *months >= 12 || *days > 31) return std::nullopt;
  return *years * 12.0 + *months + *days / kDaysPerMonth;
}

/// A target_child_age cell: CHILDES "Y;MM.DD" or a plain number of months.
inline std::optional<double> parse_age_cell(std::string_view cell) {
  if (cell.find(';') != std::string_view::npos) return parse_age(cell);
  if (cell.empty()) return std::nullopt;
  double months = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), months);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !(months >= 0) ||
      !std::isfinite(months))
    return std::nullopt;
  return months;
}

/// Source column for each record field. An empty name disables the field.
/// Defaults follow the childes-db utterance table.
struct CorpusSchema {
  std::string utterance_id = "id";
  std::string transcript_id = "transcript_id";
  std::string corpus_id = "corpus_id";
  std::string collection_id = "collection_id";
  std::string speaker_role = "speaker_code";
  std::string target_child_age = "target_child_age";
  std::string gloss = "gloss";
  std::string phonemized = "phonemized";  ///< optional in the input
  std::string child_role = "CHI";
};

inline constexpr std::string_view kIsChildColumn = "is_child";
inline constexpr std::string_view kErrorsColumn = "errors";

struct UtteranceRecord {
  std::string utterance_id;
  std::string transcript_id;
  std::string corpus_id;
  std::string collection_id;
  std::string speaker_role;
  std::optional<double> target_child_age;
  std::string gloss;
  std::optional<std::string> phonemized;
  bool is_child = false;
  std::string errors;
  /// Columns not mapped to a field, in source order.
  std::vector<std::pair<std::string, std::string>> extra;
  /// The source row as read, parallel to the table header.
  csv::Row cells;
  std::size_t line = 0;
};

struct RowError {
  std::size_t line;
  std::string message;
};

class CorpusReader {
 public:
  CorpusReader(std::istream& in, CorpusSchema schema) : reader_(in), schema_(std::move(schema)) {
    if (!reader_.next(header_)) throw FormatError("corpus CSV has no header row");
    auto locate = [&](const std::string& name, bool required) {
      if (name.empty()) return npos;
      const std::size_t i = csv::column_index(header_, name);
      if (i == npos && required)
        throw FormatError("corpus CSV is missing mapped column '" + name + "'", 1);
      return i;
    };
    utterance_id_ = locate(schema_.utterance_id, true);
    transcript_id_ = locate(schema_.transcript_id, true);
    corpus_id_ = locate(schema_.corpus_id, true);
    collection_id_ = locate(schema_.collection_id, true);
    speaker_role_ = locate(schema_.speaker_role, true);
    age_ = locate(schema_.target_child_age, true);
    gloss_ = locate(schema_.gloss, true);
    phonemized_ = locate(schema_.phonemized, false);
  }

  const csv::Row& header() const noexcept { return header_; }
  const CorpusSchema& schema() const noexcept { return schema_; }
  const std::vector<RowError>& row_errors() const noexcept { return errors_; }

  /// Next well-formed record. Rows with the wrong field count are skipped
  /// and recorded in row_errors().
  bool next(UtteranceRecord& rec) {
    csv::Row row;
    for (;;) {
      try {
        if (!reader_.next(row)) return false;
      } catch (const FormatError& e) {
        errors_.push_back({reader_.line(), e.what()});
        return false;
      }
      if (row.size() == 1 && row[0].empty()) continue;
      if (row.size() == header_.size()) break;
      errors_.push_back({reader_.line(), "expected " + std::to_string(header_.size()) +
                                             " fields, found " + std::to_string(row.size())});
    }
    rec = UtteranceRecord{};
    rec.line = reader_.line();
    auto cell = [&](std::size_t i) { return i == npos ? std::string() : row[i]; };
    rec.utterance_id = cell(utterance_id_);
    rec.transcript_id = cell(transcript_id_);
    rec.corpus_id = cell(corpus_id_);
    rec.collection_id = cell(collection_id_);
    rec.speaker_role = cell(speaker_role_);
    rec.target_child_age = parse_age_cell(cell(age_));
    rec.gloss = cell(gloss_);
    if (phonemized_ != npos) rec.phonemized = row[phonemized_];
    rec.is_child = rec.speaker_role == schema_.child_role;
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (i == utterance_id_ || i == transcript_id_ || i == corpus_id_ || i == collection_id_ ||
          i == speaker_role_ || i == age_ || i == gloss_ || i == phonemized_ ||
          header_[i] == kIsChildColumn || header_[i] == kErrorsColumn)
        continue;
      rec.extra.emplace_back(header_[i], row[i]);
    }
    rec.cells = std::move(row);
    return true;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  csv::Reader reader_;
  CorpusSchema schema_;
  csv::Row header_;
  std::vector<RowError> errors_;
  std::size_t utterance_id_ = npos, transcript_id_ = npos, corpus_id_ = npos,
              collection_id_ = npos, speaker_role_ = npos, age_ = npos, gloss_ = npos,
              phonemized_ = npos;
};

struct CorpusTable {
  csv::Row header;
  CorpusSchema schema;
  std::vector<UtteranceRecord> records;
  std::vector<RowError> skipped;
};

inline CorpusTable read_corpus(std::istream& in, const CorpusSchema& schema = {}) {
  CorpusReader reader(in, schema);
  CorpusTable table{reader.header(), schema, {}, {}};
  UtteranceRecord rec;
  while (reader.next(rec)) table.records.push_back(std::move(rec));
  table.skipped = reader.row_errors();
  return table;
}

inline CorpusTable read_corpus(const std::string& path, const CorpusSchema& schema = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus '" + path + "'");
  return read_corpus(in, schema);
}

struct ConvertOptions {
  bool keep_word_boundaries = false;
  bool uncorrected = false;
  unsigned workers = 1;
};

struct CorpusSummary {
  std::size_t rows = 0;
  std::size_t converted = 0;
  std::size_t errors = 0;
  std::size_t segment_tokens = 0;
  SegmentSet observed;
  UnmappedCounts unmapped;

  void merge(const CorpusSummary& other) {
    rows += other.rows;
    converted += other.converted;
    errors += other.errors;
    segment_tokens += other.segment_tokens;
    observed.insert(other.observed.begin(), other.observed.end());
    merge_into(unmapped, other.unmapped);
  }
};

/// Converts one record in place.
inline void convert_record(UtteranceRecord& rec, std::size_t index, const Backend& backend,
                           const FoldMap* fold_map, const ConvertOptions& options,
                           CorpusSummary& summary) {
  ++summary.rows;
  rec.errors.clear();
  try {
    PhonemeStream stream = convert_utterance(backend, rec.gloss, options.keep_word_boundaries,
                                             index, &summary.unmapped);
    if (!options.uncorrected && fold_map) stream = apply_fold(*fold_map, stream);
    rec.phonemized = emit_stream(stream, options.keep_word_boundaries);
    const SegmentSet types = segment_types(stream);
    summary.observed.insert(types.begin(), types.end());
    summary.segment_tokens += stream.segment_count();
    ++summary.converted;
  } catch (const Error& e) {
    rec.phonemized = std::string();
    rec.errors = e.what();
    ++summary.errors;
  }
}

/// Fills `phonemized` for every record. Folding is skipped when
/// options.uncorrected is set or no map is given. Records keep their order
/// and results do not depend on the worker count.
inline CorpusSummary convert_corpus(std::span<UtteranceRecord> records, const Backend& backend,
                                    const FoldMap* fold_map, const ConvertOptions& options) {
  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1 || records.size() < 2) {
    CorpusSummary summary;
    for (std::size_t i = 0; i < records.size(); ++i)
      convert_record(records[i], i, backend, fold_map, options, summary);
    return summary;
  }

  constexpr std::size_t kBlock = 256;
  std::atomic<std::size_t> next_block{0};
  std::vector<CorpusSummary> partial(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (;;) {
        const std::size_t begin = next_block.fetch_add(1) * kBlock;
        if (begin >= records.size()) break;
        const std::size_t end = std::min(begin + kBlock, records.size());
        for (std::size_t i = begin; i < end; ++i)
          convert_record(records[i], i, backend, fold_map, options, partial[w]);
      }
    });
  }
  for (auto& t : threads) t.join();
  CorpusSummary summary;
  for (const auto& p : partial) summary.merge(p);
  return summary;
}

/// Stable sort by child age; records without an age go last.
inline void sort_by_age(std::vector<UtteranceRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const UtteranceRecord& a, const UtteranceRecord& b) {
                     if (!a.target_child_age || !b.target_child_age)
                       return a.target_child_age.has_value() && !b.target_child_age.has_value();
                     return *a.target_child_age < *b.target_child_age;
                   });
}

namespace detail {

inline std::string format_months(double months) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, months);
  return std::string(buf, ptr);
}

/// Source cells of a record, rebuilt from its fields when it was not read
/// from a file with this header.
inline csv::Row source_cells(const UtteranceRecord& rec, const csv::Row& header,
                             const CorpusSchema& schema) {
  if (rec.cells.size() == header.size()) return rec.cells;
  csv::Row row(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& name = header[i];
    if (name == schema.utterance_id) row[i] = rec.utterance_id;
    else if (name == schema.transcript_id) row[i] = rec.transcript_id;
    else if (name == schema.corpus_id) row[i] = rec.corpus_id;
    else if (name == schema.collection_id) row[i] = rec.collection_id;
    else if (name == schema.speaker_role) row[i] = rec.speaker_role;
    else if (name == schema.gloss) row[i] = rec.gloss;
    else if (name == schema.target_child_age)
      row[i] = rec.target_child_age ? format_months(*rec.target_child_age) : std::string();
    else
      for (const auto& [key, value] : rec.extra)
        if (key == name) row[i] = value;
  }
  return row;
}

}  // namespace detail

/// Writes the source columns unchanged, then phonemized, is_child and
/// errors (overwriting those columns in place if the source had them).
inline void write_corpus(std::ostream& out, const CorpusTable& table) {
  csv::Row header = table.header;
  auto ensure = [&](std::string_view name) {
    std::size_t i = csv::column_index(header, name);
    if (i == static_cast<std::size_t>(-1)) {
      header.emplace_back(name);
      i = header.size() - 1;
    }
    return i;
  };
  const std::string phonemized_name =
      table.schema.phonemized.empty() ? std::string("phonemized") : table.schema.phonemized;
  const std::size_t phon_col = ensure(phonemized_name);
  const std::size_t child_col = ensure(kIsChildColumn);
  const std::size_t err_col = ensure(kErrorsColumn);
  csv::write_row(out, header);
  for (const auto& rec : table.records) {
    csv::Row row = detail::source_cells(rec, table.header, table.schema);
    row.resize(header.size());
    row[phon_col] = rec.phonemized.value_or(std::string());
    row[child_col] = rec.is_child ? "true" : "false";
    row[err_col] = rec.errors;
    csv::write_row(out, row);
  }
  if (!out) throw Error("failed writing corpus CSV");
}

inline void write_corpus(const std::string& path, const CorpusTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot create '" + path + "'");
  write_corpus(out, table);
}

}  // namespace ipastream
