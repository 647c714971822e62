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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ipastream {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file: bad header, bad rule line, bad CSV quoting.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A key that is not present: segment, feature, syllable, inventory id.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Precondition violated by the caller.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Lexicon miss with no rule fallback.
class OutOfVocabularyError : public Error {
 public:
  explicit OutOfVocabularyError(const std::string& word)
      : Error("out-of-vocabulary word '" + word + "'"), word_(word) {}

  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

/// Text that cannot be split into syllables of a table.
class SegmentationError : public Error {
 public:
  SegmentationError(const std::string& text, std::size_t offset)
      : Error("cannot segment '" + text + "' at offset " + std::to_string(offset)),
        offset_(offset) {}

  /// Code-point offset of the first unconsumed character.
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ToneAttachmentError : public Error {
 public:
  using Error::Error;
};

/// Segment with zero probability under an unsmoothed model.
class UnseenSymbolError : public Error {
 public:
  explicit UnseenSymbolError(const std::string& segment)
      : Error("segment '" + segment + "' has no probability under the model"),
        segment_(segment) {}

  const std::string& segment() const noexcept { return segment_; }

 private:
  std::string segment_;
};

/// A backend failure annotated with where in the input it happened.
class ConversionError : public Error {
 public:
  ConversionError(const std::string& cause, std::string word, std::size_t word_index,
                  std::size_t utterance_index)
      : Error("utterance " + std::to_string(utterance_index) + ", word " +
              std::to_string(word_index) + " '" + word + "': " + cause),
        word_(std::move(word)),
        word_index_(word_index),
        utterance_index_(utterance_index) {}

  const std::string& word() const noexcept { return word_; }
  std::size_t word_index() const noexcept { return word_index_; }
  std::size_t utterance_index() const noexcept { return utterance_index_; }

 private:
  std::string word_;
  std::size_t word_index_;
  std::size_t utterance_index_;
};

}  // namespace ipastream
