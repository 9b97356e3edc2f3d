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

#include "imageability/lexicon.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <string>
#include <unordered_map>

#include "imageability/error.h"
#include "imageability/io.h"
#include "imageability/text.h"

namespace imageability {
namespace {

constexpr std::string_view kCanonicalMagic = "#lexicon v1";

// Reads an unsigned fixed-width field. Blanks are padding; an all-blank field
// reads as 0. Returns nullopt on any other non-digit byte.
std::optional<int64_t> ReadNumericField(std::string_view line, FieldSpan span) {
  const std::string_view field = line.substr(span.column - 1, span.width);
  int64_t value = 0;
  for (const char c : field) {
    if (c == ' ') continue;
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

bool IsRating(int64_t value) {
  return value >= kMinMrcRating && value <= kMaxMrcRating;
}

FieldSpan ReadSpan(const nlohmann::json& fields, const char* name) {
  if (!fields.contains(name)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("layout is missing field '") + name + "'");
  }
  const auto& field = fields.at(name);
  FieldSpan span{field.at("column").get<size_t>(),
                 field.at("width").get<size_t>()};
  if (span.column == 0 || span.width == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("layout field '") + name +
                    "' needs a 1-based column and positive width");
  }
  return span;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

char WordTypeCode(WordType type) {
  switch (type) {
    case WordType::kNoun: return 'n';
    case WordType::kVerb: return 'v';
    case WordType::kAdjective: return 'a';
    case WordType::kAdverb: return 'd';
    case WordType::kOther: return 'o';
    case WordType::kUnknown: return 'u';
  }
  return 'u';
}

std::optional<WordType> WordTypeFromCode(char code) {
  switch (code) {
    case 'n': return WordType::kNoun;
    case 'v': return WordType::kVerb;
    case 'a': return WordType::kAdjective;
    case 'd': return WordType::kAdverb;
    case 'o': return WordType::kOther;
    case 'u': return WordType::kUnknown;
    default: return std::nullopt;
  }
}

std::optional<WordType> WordTypeFromName(std::string_view name) {
  const std::string lower = AsciiLower(Trim(name));
  if (lower == "noun") return WordType::kNoun;
  if (lower == "verb") return WordType::kVerb;
  if (lower == "adjective") return WordType::kAdjective;
  if (lower == "adverb") return WordType::kAdverb;
  if (lower == "other") return WordType::kOther;
  if (lower == "unknown") return WordType::kUnknown;
  return std::nullopt;
}

bool IsValidEntry(const LexiconEntry& entry) {
  if (entry.word.empty() || ContainsWhitespace(entry.word) ||
      AsciiLower(entry.word) != entry.word) {
    return false;
  }
  if (entry.imageability && !IsRating(*entry.imageability)) return false;
  if (entry.concreteness_mrc && !IsRating(*entry.concreteness_mrc)) return false;
  if (entry.concreteness_brysbaert &&
      (*entry.concreteness_brysbaert < kMinBrysbaert ||
       *entry.concreteness_brysbaert > kMaxBrysbaert)) {
    return false;
  }
  return !entry.brown_freq || *entry.brown_freq >= 0;
}

FixedWidthLayout FixedWidthLayout::FromJson(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("layout is not valid JSON: ") + e.what());
  }
  FixedWidthLayout layout;
  try {
    const auto& fields = doc.at("fields");
    layout.imageability = ReadSpan(fields, "imageability");
    layout.concreteness = ReadSpan(fields, "concreteness");
    layout.brown_freq = ReadSpan(fields, "brown_freq");
    layout.word_type = ReadSpan(fields, "word_type");
    layout.word_column = doc.at("word_column").get<size_t>();
    const std::string terminator = doc.value("word_terminator", "|");
    if (terminator.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "word_terminator must be a single character");
    }
    layout.word_terminator = terminator[0];
    for (const auto& [code, name] : doc.at("word_type_codes").items()) {
      const auto type = WordTypeFromName(name.get<std::string>());
      if (code.size() != 1 || !type) {
        throw Error(ErrorCode::kInvalidArgument,
                    "bad word_type_codes entry '" + code + "'");
      }
      layout.word_type_codes[code[0]] = *type;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("layout is missing required keys: ") + e.what());
  }
  if (layout.word_column == 0) {
    throw Error(ErrorCode::kInvalidArgument, "word_column is 1-based");
  }
  return layout;
}

FixedWidthLayout FixedWidthLayout::Load(const std::filesystem::path& path) {
  return FromJson(ReadFile(path));
}

ParseResult ParseMrc(std::string_view content, const FixedWidthLayout& layout,
                     bool include_all) {
  ParseResult result;
  size_t min_length = layout.word_column;
  for (const FieldSpan& span : {layout.imageability, layout.concreteness,
                                layout.brown_freq, layout.word_type}) {
    min_length = std::max(min_length, span.column - 1 + span.width);
  }

  const std::vector<std::string> lines = SplitLines(content);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const size_t line_no = i + 1;
    if (line.empty()) continue;
    if (line.size() < min_length) {
      result.issues.push_back({line_no, "line shorter than layout"});
      continue;
    }
    const auto imag = ReadNumericField(line, layout.imageability);
    const auto conc = ReadNumericField(line, layout.concreteness);
    const auto brown = ReadNumericField(line, layout.brown_freq);
    if (!imag || !conc || !brown) {
      result.issues.push_back({line_no, "non-digit byte in numeric column"});
      continue;
    }
    if ((*imag != 0 && !IsRating(*imag)) || (*conc != 0 && !IsRating(*conc))) {
      result.issues.push_back({line_no, "rating outside [100,700]"});
      continue;
    }
    if (*imag == 0 && !include_all) {
      ++result.skipped_unrated;
      continue;
    }

    std::string_view word = line.substr(layout.word_column - 1);
    word = word.substr(0, word.find(layout.word_terminator));
    word = Trim(word);
    if (word.empty()) {
      result.issues.push_back({line_no, "empty word field"});
      continue;
    }
    if (ContainsWhitespace(word)) {
      ++result.skipped_multiword;
      continue;
    }

    LexiconEntry entry;
    entry.word = AsciiLower(word);
    if (*imag != 0) entry.imageability = static_cast<int>(*imag);
    if (*conc != 0) entry.concreteness_mrc = static_cast<int>(*conc);
    if (*brown != 0) entry.brown_freq = *brown;
    const char code = line[layout.word_type.column - 1];
    const auto it = layout.word_type_codes.find(code);
    entry.word_type = it != layout.word_type_codes.end() ? it->second
                                                         : WordType::kUnknown;
    result.entries.push_back(std::move(entry));
  }
  return result;
}

ParseResult ParseBrysbaert(std::string_view content) {
  ParseResult result;
  const std::vector<std::string> lines = SplitLines(content);
  if (lines.empty()) {
    throw Error(ErrorCode::kMissingColumn, "concreteness table has no header");
  }

  const auto header = SplitChar(lines[0], '\t');
  std::optional<size_t> word_col, mean_col, pos_col;
  for (size_t c = 0; c < header.size(); ++c) {
    const std::string name = AsciiLower(Trim(header[c]));
    if (name == "word" && !word_col) word_col = c;
    if ((name == "conc.m" || name == "conc_m" || name == "conc.mean" ||
         name == "mean" || name == "concreteness") &&
        !mean_col) {
      mean_col = c;
    }
    if (name == "dom_pos" && !pos_col) pos_col = c;
  }
  if (!word_col) {
    throw Error(ErrorCode::kMissingColumn,
                "concreteness table header has no word column", "line 1");
  }
  if (!mean_col) {
    throw Error(ErrorCode::kMissingColumn,
                "concreteness table header has no mean concreteness column",
                "line 1");
  }

  const size_t needed = std::max(*word_col, *mean_col) + 1;
  for (size_t i = 1; i < lines.size(); ++i) {
    const size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = SplitChar(lines[i], '\t');
    if (fields.size() < needed) {
      result.issues.push_back({line_no, "too few columns"});
      continue;
    }
    const std::string_view word = Trim(fields[*word_col]);
    if (word.empty()) {
      result.issues.push_back({line_no, "empty word"});
      continue;
    }
    if (ContainsWhitespace(word)) {
      ++result.skipped_multiword;
      continue;
    }
    const auto mean = ParseDouble(Trim(fields[*mean_col]));
    if (!mean || *mean < kMinBrysbaert || *mean > kMaxBrysbaert) {
      result.issues.push_back({line_no, "mean concreteness outside [1,5]"});
      continue;
    }
    LexiconEntry entry;
    entry.word = AsciiLower(word);
    entry.concreteness_brysbaert = *mean;
    if (pos_col && *pos_col < fields.size()) {
      entry.word_type =
          WordTypeFromName(fields[*pos_col]).value_or(WordType::kOther);
      if (Trim(fields[*pos_col]).empty() ||
          Trim(fields[*pos_col]).starts_with("#")) {
        entry.word_type = WordType::kUnknown;
      }
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

const LexiconEntry* Lexicon::Find(std::string_view word) const {
  const auto it = entries_.find(AsciiLower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

const LexiconEntry* Lexicon::Lookup(std::string_view token,
                                    bool plural_fallback) const {
  const std::string lower = AsciiLower(token);
  if (const auto it = entries_.find(lower); it != entries_.end()) {
    return &it->second;
  }
  if (!plural_fallback) return nullptr;
  if (lower.size() > 1 && lower.ends_with('s')) {
    if (const auto it = entries_.find(lower.substr(0, lower.size() - 1));
        it != entries_.end()) {
      return &it->second;
    }
  }
  if (lower.size() > 2 && lower.ends_with("es")) {
    if (const auto it = entries_.find(lower.substr(0, lower.size() - 2));
        it != entries_.end()) {
      return &it->second;
    }
  }
  return nullptr;
}

std::span<const std::string> Lexicon::WordsWithImageability(int rating) const {
  const auto it = by_imageability_.find(rating);
  if (it == by_imageability_.end()) return {};
  return it->second;
}

void Lexicon::BuildIndex() {
  by_imageability_.clear();
  for (const auto& [word, entry] : entries_) {
    if (entry.imageability) by_imageability_[*entry.imageability].push_back(word);
  }
}

Lexicon Merge(std::span<const LexiconEntry> entries,
              std::vector<SourceRecord> sources) {
  Lexicon lexicon;
  lexicon.sources_ = std::move(sources);
  auto& merged = lexicon.entries_;
  auto& conflicts = lexicon.conflicts_;

  const auto merge_field = [&](const std::string& word, const char* name,
                               auto& into, const auto& from) {
    if (!from) return;
    if (!into) {
      into = from;
    } else if (*into != *from) {
      conflicts.push_back(word + ": " + name);
    }
  };

  for (const LexiconEntry& entry : entries) {
    const std::string key = AsciiLower(entry.word);
    auto [it, inserted] = merged.try_emplace(key, entry);
    if (inserted) {
      it->second.word = key;
      continue;
    }
    LexiconEntry& into = it->second;
    merge_field(key, "imageability", into.imageability, entry.imageability);
    merge_field(key, "concreteness_mrc", into.concreteness_mrc,
                entry.concreteness_mrc);
    merge_field(key, "concreteness_brysbaert", into.concreteness_brysbaert,
                entry.concreteness_brysbaert);
    merge_field(key, "brown_freq", into.brown_freq, entry.brown_freq);
    if (into.word_type == WordType::kUnknown) into.word_type = entry.word_type;
  }
  lexicon.BuildIndex();
  return lexicon;
}

std::string SerializeLexicon(const Lexicon& lexicon,
                             std::string_view config_line) {
  std::string out(kCanonicalMagic);
  out += '\n';
  if (!config_line.empty()) {
    out += "#config\t";
    out += config_line;
    out += '\n';
  }
  for (const SourceRecord& source : lexicon.sources()) {
    out += "#source\t" + source.name + '\t' +
           std::to_string(source.record_count) + '\t' + source.ingested_at +
           '\n';
  }
  for (const auto& [word, entry] : lexicon.entries()) {
    out += word;
    out += '\t';
    if (entry.imageability) out += std::to_string(*entry.imageability);
    out += '\t';
    if (entry.concreteness_mrc) out += std::to_string(*entry.concreteness_mrc);
    out += '\t';
    if (entry.concreteness_brysbaert) {
      out += FormatDouble(*entry.concreteness_brysbaert);
    }
    out += '\t';
    out += WordTypeCode(entry.word_type);
    out += '\t';
    if (entry.brown_freq) out += std::to_string(*entry.brown_freq);
    out += '\n';
  }
  return out;
}

Lexicon ParseCanonicalLexicon(std::string_view content,
                              std::string_view location) {
  const std::vector<std::string> lines = SplitLines(content);
  const auto where = [&](size_t line_no) {
    return std::string(location) + ":" + std::to_string(line_no);
  };
  if (lines.empty() || !lines[0].starts_with(kCanonicalMagic)) {
    throw Error(ErrorCode::kBadMagic, "missing '#lexicon v1' header", where(1));
  }

  std::vector<LexiconEntry> entries;
  std::vector<SourceRecord> sources;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const auto fields = SplitChar(line, '\t');
    if (line.starts_with('#')) {
      if (fields[0] == "#source") {
        if (fields.size() != 4) {
          throw Error(ErrorCode::kMalformedRecord, "bad #source line",
                      where(i + 1));
        }
        const auto count = ParseInt(fields[2]);
        if (!count || *count < 0) {
          throw Error(ErrorCode::kMalformedRecord, "bad source record count",
                      where(i + 1));
        }
        sources.push_back({std::string(fields[1]), static_cast<size_t>(*count),
                           std::string(fields[3])});
      }
      continue;
    }
    if (fields.size() != 6 || fields[4].size() != 1) {
      throw Error(ErrorCode::kMalformedRecord, "expected 6 tab-separated fields",
                  where(i + 1));
    }
    LexiconEntry entry;
    entry.word = std::string(fields[0]);
    bool ok = true;
    const auto read_int = [&](std::string_view text, auto& out) {
      if (text.empty()) return;
      const auto value = ParseInt(text);
      if (!value) {
        ok = false;
        return;
      }
      out = static_cast<typename std::decay_t<decltype(out)>::value_type>(*value);
    };
    read_int(fields[1], entry.imageability);
    read_int(fields[2], entry.concreteness_mrc);
    if (!fields[3].empty()) {
      entry.concreteness_brysbaert = ParseDouble(fields[3]);
      ok = ok && entry.concreteness_brysbaert.has_value();
    }
    const auto type = WordTypeFromCode(fields[4][0]);
    ok = ok && type.has_value();
    if (type) entry.word_type = *type;
    read_int(fields[5], entry.brown_freq);
    if (!ok || !IsValidEntry(entry)) {
      throw Error(ErrorCode::kMalformedRecord, "invalid lexicon record",
                  where(i + 1));
    }
    entries.push_back(std::move(entry));
  }
  return Merge(entries, std::move(sources));
}

Lexicon LoadLexicon(const std::filesystem::path& path) {
  return ParseCanonicalLexicon(ReadFile(path), path.string());
}

void SaveLexicon(const Lexicon& lexicon, const std::filesystem::path& path,
                 std::string_view config_line) {
  AtomicWriteFile(path, SerializeLexicon(lexicon, config_line));
}

}  // namespace imageability
