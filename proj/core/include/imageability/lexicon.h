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

#ifndef IMAGEABILITY_LEXICON_H_
#define IMAGEABILITY_LEXICON_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imageability {

enum class WordType { kNoun, kVerb, kAdjective, kAdverb, kOther, kUnknown };

// Single-letter codes of the canonical lexicon format: n v a d o u.
char WordTypeCode(WordType type);
std::optional<WordType> WordTypeFromCode(char code);
std::optional<WordType> WordTypeFromName(std::string_view name);

inline constexpr int kMinMrcRating = 100;
inline constexpr int kMaxMrcRating = 700;
inline constexpr double kMinBrysbaert = 1.0;
inline constexpr double kMaxBrysbaert = 5.0;

struct LexiconEntry {
  std::string word;  // lowercase, no whitespace
  std::optional<int> imageability;
  std::optional<int> concreteness_mrc;
  std::optional<double> concreteness_brysbaert;
  WordType word_type = WordType::kUnknown;
  std::optional<int64_t> brown_freq;

  bool operator==(const LexiconEntry&) const = default;
};

// Checks the entry invariants (word shape and rating ranges).
bool IsValidEntry(const LexiconEntry& entry);

struct SourceRecord {
  std::string name;
  size_t record_count = 0;
  std::string ingested_at;

  bool operator==(const SourceRecord&) const = default;
};

// Column positions are 1-based, as in the MRC documentation.
struct FieldSpan {
  size_t column = 0;
  size_t width = 0;
};

struct FixedWidthLayout {
  FieldSpan imageability;
  FieldSpan concreteness;
  FieldSpan brown_freq;
  FieldSpan word_type;
  size_t word_column = 0;
  char word_terminator = '|';
  std::map<char, WordType> word_type_codes;

  static FixedWidthLayout FromJson(std::string_view json);
  static FixedWidthLayout Load(const std::filesystem::path& path);
};

struct ParseIssue {
  size_t line = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  std::vector<LexiconEntry> entries;
  std::vector<ParseIssue> issues;  // MalformedRecord, one per skipped line
  size_t skipped_multiword = 0;
  size_t skipped_unrated = 0;
};

// Parses MRC dictionary records. Lines without an imageability rating are
// dropped unless `include_all` is set; zeros in rating columns are nulls.
ParseResult ParseMrc(std::string_view content, const FixedWidthLayout& layout,
                     bool include_all = false);

// Parses the tab-separated Brysbaert concreteness table. Throws
// Error(kMissingColumn) when the word or mean column is absent.
ParseResult ParseBrysbaert(std::string_view content);

// Immutable after construction; safe for concurrent reads.
class Lexicon {
 public:
  Lexicon() = default;

  // Case-insensitive exact lookup.
  const LexiconEntry* Find(std::string_view word) const;

  // Exact lookup, then (if `plural_fallback`) the word minus a trailing "s",
  // then minus a trailing "es".
  const LexiconEntry* Lookup(std::string_view token, bool plural_fallback) const;

  // Words sharing an imageability rating, sorted.
  std::span<const std::string> WordsWithImageability(int rating) const;

  const std::map<std::string, LexiconEntry>& entries() const { return entries_; }
  const std::vector<SourceRecord>& sources() const { return sources_; }
  const std::vector<std::string>& conflicts() const { return conflicts_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const Lexicon& other) const {
    return entries_ == other.entries_ && sources_ == other.sources_;
  }

 private:
  friend Lexicon Merge(std::span<const LexiconEntry> entries,
                       std::vector<SourceRecord> sources);
  void BuildIndex();

  std::map<std::string, LexiconEntry> entries_;
  std::vector<SourceRecord> sources_;
  std::vector<std::string> conflicts_;
  std::map<int, std::vector<std::string>> by_imageability_;
};

// One entry per word. Present values from earlier entries win; conflicting
// later values are recorded in Lexicon::conflicts(). Absent fields are filled
// from later entries and word_type takes the first non-unknown value.
Lexicon Merge(std::span<const LexiconEntry> entries,
              std::vector<SourceRecord> sources = {});

// Canonical interchange format ("#lexicon v1" header, tab-separated).
// `config_line`, when non-empty, is emitted as a "#config" header line and
// ignored by the reader.
std::string SerializeLexicon(const Lexicon& lexicon,
                             std::string_view config_line = {});
Lexicon ParseCanonicalLexicon(std::string_view content,
                              std::string_view location = {});
Lexicon LoadLexicon(const std::filesystem::path& path);
void SaveLexicon(const Lexicon& lexicon, const std::filesystem::path& path,
                 std::string_view config_line = {});

}  // namespace imageability

#endif  // IMAGEABILITY_LEXICON_H_
