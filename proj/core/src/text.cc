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

#include "imageability/text.h"


namespace imageability {
namespace {

constexpr std::string_view kEllipsis = "\xE2\x80\xA6";

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Returns the length of the peelable punctuation ending at `end` (exclusive),
// or 0.
size_t PunctEndingAt(std::string_view piece, size_t end) {
  if (end == 0) return 0;
  switch (piece[end - 1]) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '"': case '\'': case ')': case ']':
      return 1;
    default:
      break;
  }
  if (end >= kEllipsis.size() &&
      piece.substr(end - kEllipsis.size(), kEllipsis.size()) == kEllipsis) {
    return kEllipsis.size();
  }
  return 0;
}

}  // namespace

bool IsPeelablePunct(std::string_view piece, size_t pos, size_t* length) {
  size_t len = 0;
  if (pos < piece.size()) {
    switch (piece[pos]) {
      case '.': case ',': case ';': case ':': case '!': case '?':
      case '"': case '\'': case ')': case ']':
        len = 1;
        break;
      default:
        if (piece.substr(pos, kEllipsis.size()) == kEllipsis) {
          len = kEllipsis.size();
        }
    }
  }
  if (length != nullptr) *length = len;
  return len > 0;
}

std::vector<Token> Tokenize(std::string_view line) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    if (i >= line.size()) break;
    size_t j = i;
    while (j < line.size() && !IsSpace(line[j])) ++j;
    const std::string_view piece = line.substr(i, j - i);

    size_t cut = piece.size();
    while (size_t len = PunctEndingAt(piece, cut)) cut -= len;

    Token token;
    if (cut == 0) {
      token.surface = std::string(piece);
    } else {
      token.surface = std::string(piece.substr(0, cut));
      token.trailing_punct = std::string(piece.substr(cut));
    }
    token.was_capitalized = HasUppercaseInitial(token.surface);
    token.index = tokens.size();
    tokens.push_back(std::move(token));
    i = j;
  }
  return tokens;
}

std::string Detokenize(std::span<const Token> tokens) {
  std::string out;
  for (const Token& token : tokens) {
    if (!out.empty()) out += ' ';
    out += token.surface;
    out += token.trailing_punct;
  }
  return out;
}

std::string NormalizeWhitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (const char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

size_t LeadingPunctLength(std::string_view surface) {
  size_t pos = 0;
  while (pos < surface.size()) {
    if (surface[pos] == '(' || surface[pos] == '[') {
      ++pos;
      continue;
    }
    size_t len = 0;
    if (!IsPeelablePunct(surface, pos, &len)) break;
    pos += len;
  }
  return pos;
}

std::string LookupKey(std::string_view surface) {
  const size_t lead = LeadingPunctLength(surface);
  std::string_view core = surface.substr(lead);
  size_t cut = core.size();
  while (size_t len = PunctEndingAt(core, cut)) cut -= len;
  return AsciiLower(core.substr(0, cut));
}

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool HasUppercaseInitial(std::string_view text) {
  for (const char c : text) {
    if (IsAsciiAlpha(c)) return c >= 'A' && c <= 'Z';
  }
  return false;
}

std::string CapitalizeInitial(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (IsAsciiAlpha(c)) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      break;
    }
  }
  return out;
}

std::string LowercaseInitial(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (IsAsciiAlpha(c)) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      break;
    }
  }
  return out;
}

bool IsCaseExempt(std::string_view surface) {
  const std::string_view core = surface.substr(LeadingPunctLength(surface));
  if (core == "I" || core.starts_with("I'")) return true;
  size_t letters = 0;
  for (const char c : core) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') ++letters;
  }
  return letters >= 2;
}

bool ContainsWhitespace(std::string_view text) {
  for (const char c : text) {
    if (IsSpace(c)) return true;
  }
  return false;
}

std::vector<std::string_view> SplitChar(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  for (;;) {
    const size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace imageability
