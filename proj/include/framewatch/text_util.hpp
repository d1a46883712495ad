// Copyright 2026 The Framewatch Authors.
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

#ifndef FRAMEWATCH_TEXT_UTIL_HPP_
#define FRAMEWATCH_TEXT_UTIL_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace framewatch {

// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input record. Line numbers are 1-based; 0 means "not from a file".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Half-open byte range into a UTF-8 string.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool intersects(const CharSpan &o) const {
    return begin < o.end && o.begin < end;
  }
  friend bool operator==(const CharSpan &, const CharSpan &) = default;
  friend auto operator<=>(const CharSpan &, const CharSpan &) = default;
};

// Decodes UTF-8; invalid bytes decode to U+FFFD one byte at a time.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);

char32_t fold_case(char32_t c);
bool is_upper(char32_t c);
bool is_letter(char32_t c);

// Lower-cases ASCII, Latin-1 and Latin Extended-A letters.
std::string case_fold(std::string_view s);

// Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// Reads a one-entry-per-line list; blank lines and '#' comments skipped.
std::vector<std::string> read_lines_file(const std::string &path);

// A word: a maximal run of letters, digits, or hyphens/apostrophes inside
// a word. Offsets are byte offsets into the input.
struct WordToken {
  CharSpan span;
  std::string text;
};
std::vector<WordToken> word_tokens(std::string_view text);

}  // namespace framewatch

#endif  // FRAMEWATCH_TEXT_UTIL_HPP_
