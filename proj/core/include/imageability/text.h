//
// Copyright 2026 The Imageability Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef IMAGEABILITY_TEXT_H_
#define IMAGEABILITY_TEXT_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imageability {

struct Token {
  std::string surface;
  std::string trailing_punct;
  bool was_capitalized = false;
  size_t index = 0;

  bool operator==(const Token&) const = default;
};

// Characters peeled off the end of a whitespace-delimited piece:
//   . , ; : ! ? " ' ) ]  and U+2026 (horizontal ellipsis).
// Hyphens and word-internal apostrophes are never peeled.
bool IsPeelablePunct(std::string_view piece, size_t pos, size_t* length);

// Splits on runs of ASCII whitespace and peels trailing punctuation into
// Token::trailing_punct. A piece made only of punctuation is kept whole as
// its own surface so that surfaces are never empty.
std::vector<Token> Tokenize(std::string_view line);

// surface + trailing_punct joined by single spaces.
std::string Detokenize(std::span<const Token> tokens);

// Trims and collapses internal whitespace runs to single spaces.
std::string NormalizeWhitespace(std::string_view text);

// The key used for all lexicon lookups of running text: leading and
// trailing punctuation removed (leading '(' and '[' included), ASCII
// lowercased. May be empty.
std::string LookupKey(std::string_view surface);

// Length of the leading punctuation prefix that LookupKey strips.
size_t LeadingPunctLength(std::string_view surface);

std::string AsciiLower(std::string_view text);
bool HasUppercaseInitial(std::string_view text);  // first alphabetic char
std::string CapitalizeInitial(std::string_view text);
std::string LowercaseInitial(std::string_view text);

// True for words that keep their case through re-capitalization: "I",
// contractions of "I", and all-uppercase words with at least two letters.
bool IsCaseExempt(std::string_view surface);

bool ContainsWhitespace(std::string_view text);

std::vector<std::string_view> SplitChar(std::string_view text, char sep);

}  // namespace imageability

#endif  // IMAGEABILITY_TEXT_H_
