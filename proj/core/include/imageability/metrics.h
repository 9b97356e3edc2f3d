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

#ifndef IMAGEABILITY_METRICS_H_
#define IMAGEABILITY_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "imageability/corpus.h"
#include "imageability/image_store.h"
#include "imageability/lexicon.h"

namespace imageability {

// ---------------------------------------------------------------------------
// Image-based measures.

// Mean CLIP percentage; nullopt for no images.
std::optional<double> AveClip(std::span<const float> clip_scores);
std::optional<double> AveClip(std::span<const ImageRecord> records);

double CosineSimilarity(std::span<const float> a, std::span<const float> b);

struct ImgSimResult {
  std::optional<double> value;  // mean pairwise cosine, nullopt if n < 2
  size_t used = 0;
  size_t zero_norm_excluded = 0;
};

// Mean cosine similarity over the n(n-1)/2 unordered pairs. Zero-norm
// vectors are excluded and counted.
ImgSimResult ImgSim(std::span<const std::span<const float>> embeddings);
ImgSimResult ImgSim(std::span<const ImageRecord> records);

// ---------------------------------------------------------------------------
// Bag-of-words lexicon measures. Tokens are looked up by LookupKey with the
// plural fallback; every token counts towards the total.

struct BowResult {
  std::optional<double> value;
  size_t total = 0;
  size_t found = 0;
};

// Mean MRC imageability over the tokens found in the lexicon.
BowResult BowImageability(std::string_view text, const Lexicon& lexicon);

// Sum of Brysbaert concreteness over found tokens divided by all tokens.
BowResult BowConcreteness(std::string_view text, const Lexicon& lexicon);

// ---------------------------------------------------------------------------
// Image-cluster concreteness of words.

// Exact k-nearest-neighbour lists under cosine distance over a fixed
// collection. Self is excluded; ties go to the lower row. With fewer than
// k + 1 rows every list holds all other rows.
class NeighborIndex {
 public:
  NeighborIndex(std::span<const std::span<const float>> rows, size_t k);

  size_t size() const { return size_; }
  size_t k() const { return k_; }  // effective list length
  std::span<const uint32_t> Neighbors(size_t row) const {
    return std::span<const uint32_t>(neighbors_).subspan(row * k_, k_);
  }

 private:
  size_t size_ = 0;
  size_t k_ = 0;
  std::vector<uint32_t> neighbors_;
};

struct WordConcreteness {
  std::string word;
  double raw_fraction = 0.0;       // mean share of neighbours from the word
  double expected_fraction = 0.0;  // (|I_w| - 1) / (N - 1)
  double normalized = 0.0;         // raw / expected
  size_t images = 0;

  bool operator==(const WordConcreteness&) const = default;
};

// `word_rows` are the rows of `index` associated with the word. nullopt when
// fewer than two rows are given.
std::optional<WordConcreteness> HesselWord(std::string_view word,
                                           const NeighborIndex& index,
                                           std::span<const size_t> word_rows);

using WordScores = std::unordered_map<std::string, WordConcreteness>;

// Sum of normalized word scores over tokens divided by the token count.
BowResult HesselSentence(std::string_view text, const WordScores& word_scores);

// Scores every word of the prompts against the images of those same prompts
// (one pooled collection).
WordScores ScoreWordsByImages(std::span<const Prompt* const> prompts,
                              const ImageStore& store, size_t k_nn);

// ---------------------------------------------------------------------------
// Manifest scoring.

struct PromptCounts {
  size_t words_total = 0;
  size_t words_found_imag = 0;
  size_t words_found_conc = 0;
  size_t images_used = 0;

  bool operator==(const PromptCounts&) const = default;
};

struct PromptScores {
  std::string prompt_id;
  Corpus corpus = Corpus::kCaptions;
  Deformance deformance = Deformance::kOriginal;
  std::string origin_id;
  std::optional<double> imag_bow;
  std::optional<double> conc_bow;
  std::optional<double> hessel_sentence;
  std::optional<double> ave_clip;
  std::optional<double> img_sim;
  PromptCounts counts;

  bool operator==(const PromptScores&) const = default;
};

enum class Measure { kImagBow, kConcBow, kHessel, kAveClip, kImgSim };
inline constexpr Measure kAllMeasures[] = {Measure::kImagBow, Measure::kConcBow,
                                           Measure::kHessel, Measure::kAveClip,
                                           Measure::kImgSim};
std::string_view MeasureName(Measure measure);
std::optional<Measure> MeasureFromName(std::string_view name);
std::optional<double> MeasureValue(const PromptScores& scores, Measure measure);

inline constexpr size_t kDefaultKnn = 50;

struct ScoreOptions {
  size_t k_nn = kDefaultKnn;
};

struct CoverageReport {
  size_t prompts = 0;
  size_t with_images = 0;
  std::vector<std::string> missing;  // prompts absent from the store
  size_t zero_norm_excluded = 0;
};

struct ScoreTable {
  std::vector<PromptScores> rows;
  CoverageReport coverage;
};

// Word image-concreteness is pooled per (corpus, deformance).
ScoreTable ScoreManifest(std::span<const Prompt> prompts,
                         const ImageStore& store, const Lexicon& lexicon,
                         const ScoreOptions& options = {});

// "#scores v1" header, then tab-separated prompt_id, corpus, deformance,
// origin_id, imag_bow, conc_bow, hessel_sentence, ave_clip, img_sim and
// counts ("total,found_imag,found_conc,images"); absent values are empty.
std::string SerializeScores(std::span<const PromptScores> rows,
                            std::span<const std::string> header_lines = {});
std::vector<PromptScores> ParseScores(std::string_view content,
                                      std::string_view location = {});
std::vector<PromptScores> LoadScores(const std::filesystem::path& path);

}  // namespace imageability

#endif  // IMAGEABILITY_METRICS_H_
