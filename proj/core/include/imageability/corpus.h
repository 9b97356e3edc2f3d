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

#ifndef IMAGEABILITY_CORPUS_H_
#define IMAGEABILITY_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imageability/lexicon.h"

namespace imageability {

enum class Corpus { kPoems, kCaptions, kNews, kMrcWords };
enum class Deformance {
  kOriginal,
  kBackward,
  kPermuted,
  kJustNouns,
  kReplacedNouns
};

// Canonical names use underscores ("mrc_words", "just_nouns"); the parsers
// also accept the hyphenated CLI spellings.
std::string_view CorpusName(Corpus corpus);
std::optional<Corpus> CorpusFromName(std::string_view name);
std::string_view DeformanceName(Deformance deformance);
std::optional<Deformance> DeformanceFromName(std::string_view name);

struct Prompt {
  std::string id;
  Corpus corpus = Corpus::kCaptions;
  Deformance deformance = Deformance::kOriginal;
  std::string text;
  std::string origin_id;
  // ';'-separated key=value provenance, e.g. "poem=3;lines=5-6;breaks=7".
  // `breaks` lists the token indices at which a new source line starts.
  std::string source_meta;

  bool operator==(const Prompt&) const = default;
};

std::optional<std::string> MetaValue(std::string_view meta,
                                     std::string_view key);
std::string WithMetaValue(std::string_view meta, std::string_view key,
                          std::string_view value);
std::string WithoutMetaValue(std::string_view meta, std::string_view key);

// Groups lines into poems separated by blank lines.
std::vector<std::vector<std::string>> SplitPoems(std::string_view content);

// Joins lines (1,2), (3,4), ... with a space after dropping empty lines; an
// odd final line becomes its own prompt.
std::vector<Prompt> PairPoemLines(std::span<const std::string> poem,
                                  size_t poem_index = 0);

// Drops captions containing "<PERSON>" or '#'. Ids carry the 1-based input
// line number.
std::vector<Prompt> FilterCaptions(std::span<const std::string> captions);

class SentenceSplitter {
 public:
  virtual ~SentenceSplitter() = default;
  virtual std::vector<std::string> Split(std::string_view text) const = 0;
};

// Breaks after '.', '!' or '?' (plus any closing quotes or brackets) when
// followed by whitespace and an uppercase letter, optionally behind an
// opening quote or bracket.
class RuleSentenceSplitter : public SentenceSplitter {
 public:
  std::vector<std::string> Split(std::string_view text) const override;
};

inline constexpr size_t kMinSentenceTokens = 10;
inline constexpr size_t kMaxSentenceTokens = 30;

struct SampleResult {
  std::vector<Prompt> prompts;
  size_t eligible = 0;   // distinct sentences with 10..30 tokens
  size_t requested = 0;
  bool shortfall = false;
};

// Uniform sample without replacement of distinct eligible sentences. The
// returned prompts keep source order.
SampleResult SampleNewsSentences(std::span<const std::string> articles,
                                 size_t n, uint64_t seed,
                                 const SentenceSplitter& splitter =
                                     RuleSentenceSplitter());

// Keeps the first occurrence of each distinct text.
std::vector<Prompt> DeduplicateByText(std::vector<Prompt> prompts);

// Uniform sample without replacement, source order kept. Returns everything
// when n >= prompts.size().
std::vector<Prompt> SamplePrompts(std::vector<Prompt> prompts, size_t n,
                                  uint64_t seed);

// One prompt per word that has an imageability rating; the id is the word.
std::vector<Prompt> WordsAsPrompts(const Lexicon& lexicon);

// Prompt manifest: "#manifest v1" header, then
// id \t corpus \t deformance \t origin_id \t meta \t text.
std::string SerializeManifest(std::span<const Prompt> prompts,
                              std::span<const std::string> header_lines = {});
std::vector<Prompt> ParseManifest(std::string_view content,
                                  std::string_view location = {},
                                  std::vector<std::string>* header_lines =
                                      nullptr);
std::vector<Prompt> LoadManifest(const std::filesystem::path& path,
                                 std::vector<std::string>* header_lines =
                                     nullptr);
void SaveManifest(std::span<const Prompt> prompts,
                  const std::filesystem::path& path,
                  std::span<const std::string> header_lines = {});

}  // namespace imageability

#endif  // IMAGEABILITY_CORPUS_H_
