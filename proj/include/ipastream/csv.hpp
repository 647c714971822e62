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

// Minimal RFC 4180 reader and writer: comma delimiter, double-quote
// quoting with "" escapes, quoted fields may span lines.

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ipastream/error.hpp"

namespace ipastream::csv {

using Row = std::vector<std::string>;

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record into `row`. Returns false at end of input.
  /// Throws FormatError on an unterminated quoted field.
  bool next(Row& row) {
    row.clear();
    if (!in_.good() || in_.peek() == std::char_traits<char>::eof()) return false;
    record_line_ = line_ + 1;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    for (;;) {
      const int ch = in_.get();
      if (ch == std::char_traits<char>::eof()) {
        if (quoted) throw FormatError("unterminated quoted field", record_line_);
        row.push_back(std::move(field));
        ++line_;
        break;
      }
      const char c = static_cast<char>(ch);
      if (quoted) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field += '"';
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field += c;
        }
        continue;
      }
      if (c == '"' && field.empty() && !field_was_quoted) {
        quoted = true;
        field_was_quoted = true;
      } else if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && in_.peek() == '\n') in_.get();
        row.push_back(std::move(field));
        ++line_;
        break;
      } else {
        field += c;
      }
    }
    if (first_ && !row.empty() && row[0].starts_with("\xEF\xBB\xBF")) row[0].erase(0, 3);
    first_ = false;
    return true;
  }

  /// Physical line on which the last returned record started (1-based).
  std::size_t line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

inline bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void write_field(std::ostream& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

inline void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    write_field(out, row[i]);
  }
  out << '\n';
}

/// Index of `name` in a header row, or npos.
inline std::size_t column_index(const Row& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return static_cast<std::size_t>(-1);
}

}  // namespace ipastream::csv
