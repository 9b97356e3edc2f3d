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

#ifndef IMAGEABILITY_ANALYSIS_H_
#define IMAGEABILITY_ANALYSIS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imageability/corpus.h"
#include "imageability/lexicon.h"
#include "imageability/metrics.h"

namespace imageability {

// Sample Pearson r. nullopt when n < 2 or either side has zero variance.
// Throws kInvalidArgument for unequal lengths.
std::optional<double> Pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationRow {
  std::string measure;
  std::optional<double> r;  // nullopt: not computable
  size_t n = 0;
  size_t dropped = 0;  // rows with an absent value on either side

  bool operator==(const CorrelationRow&) const = default;
};

// Pearson with pairwise deletion of absent values.
CorrelationRow PearsonPairwise(std::string_view measure,
                               std::span<const std::optional<double>> x,
                               std::span<const std::optional<double>> y);

inline constexpr double kZeroBaseEpsilon = 1e-12;

// 100 * (deformed - original) / original; nullopt for |original| < 1e-12.
std::optional<double> PercentChange(double original, double deformed);

enum class Aggregation {
  kMeanOfPairs,    // mean of per-pair percent changes
  kChangeOfMeans,  // percent change between the two column means
};

struct PercentChangeRow {
  Corpus corpus = Corpus::kCaptions;
  Deformance deformance = Deformance::kBackward;
  Measure measure = Measure::kImagBow;
  std::optional<double> mean_percent_change;
  size_t n_pairs = 0;
  size_t n_skipped_zero_base = 0;
  size_t n_skipped_absent = 0;
};

struct PercentChangeReport {
  Aggregation aggregation = Aggregation::kMeanOfPairs;
  std::vector<PercentChangeRow> rows;  // ordered by corpus, deformance, measure
  size_t unmatched_rows = 0;           // deformed rows without an original
};

// Pairs every deformed row with the original named by its origin_id.
PercentChangeReport DeformanceTable(std::span<const PromptScores> scores,
                                    Aggregation aggregation =
                                        Aggregation::kMeanOfPairs);

struct DecileGroupRow {
  Deformance deformance = Deformance::kBackward;
  std::optional<double> mean_percent_change;
  size_t n_pairs = 0;
  size_t n_skipped = 0;
};

struct ChangePoint {
  Deformance deformance = Deformance::kBackward;
  double original = 0.0;
  double percent_change = 0.0;
};

struct DecileReport {
  Measure measure = Measure::kImagBow;
  double q = 0.10;
  size_t n_originals = 0;
  std::vector<std::string> bottom_ids;
  std::vector<std::string> top_ids;
  std::vector<DecileGroupRow> bottom;
  std::vector<DecileGroupRow> top;
  std::vector<ChangePoint> points;  // every original/deformed pair
};

inline constexpr size_t kMinDecileRows = 10;

// Nearest-rank selection: the ceil(q * n) lowest originals form the bottom
// group and up to ceil(q * n) of the rest, from the top, the top group. Ties
// sort by input order. Throws kTooFewRows below ten usable originals and
// kInvalidArgument unless 0 < q <= 0.5.
DecileReport DecileAnalysis(std::span<const PromptScores> scores, Measure measure,
                            double q = 0.10);

struct CorpusAverage {
  Corpus corpus = Corpus::kCaptions;
  std::optional<double> imag_bow;
  size_t n_imag = 0;
  std::optional<double> conc_bow;
  size_t n_conc = 0;
};

// Per-corpus means over original prompts.
std::vector<CorpusAverage> CorpusAverages(std::span<const PromptScores> scores);

// Ratings file: "#ratings v1" header then id \t rating.
using Ratings = std::map<std::string, double>;
Ratings ParseRatings(std::string_view content, std::string_view location = {});
Ratings LoadRatings(const std::filesystem::path& path);
std::string SerializeRatings(const Ratings& ratings);

// Word -> MRC imageability for every rated word.
Ratings RatingsFromLexicon(const Lexicon& lexicon);

struct CorrelationReport {
  std::vector<CorrelationRow> rows;  // one per measure, then "brown_freq"
  size_t joined = 0;
  size_t unjoined = 0;  // score rows without a rating
};

// Joins score rows to ratings on prompt id. When a lexicon is given, adds the
// Brown frequency of the id (as a word) as a control row. Throws kNoOverlap.
CorrelationReport CorrelateWithRatings(std::span<const PromptScores> scores,
                                       const Ratings& ratings,
                                       const Lexicon* lexicon = nullptr);

}  // namespace imageability

#endif  // IMAGEABILITY_ANALYSIS_H_
