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

#include "imageability/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "imageability/error.h"
#include "imageability/text.h"
#include "testing.h"

namespace imageability {
namespace {

using ::imageability::testing::MakePrompt;
using ::imageability::testing::RandomVector;

// Plain O(n^2) reference in long double.
long double ReferenceImgSim(const std::vector<std::vector<float>>& vs) {
  long double total = 0;
  size_t pairs = 0;
  for (size_t i = 0; i < vs.size(); ++i) {
    for (size_t j = i + 1; j < vs.size(); ++j) {
      long double dot = 0, a = 0, b = 0;
      for (size_t d = 0; d < vs[i].size(); ++d) {
        dot += static_cast<long double>(vs[i][d]) * vs[j][d];
        a += static_cast<long double>(vs[i][d]) * vs[i][d];
        b += static_cast<long double>(vs[j][d]) * vs[j][d];
      }
      total += dot / std::sqrt(a * b);
      ++pairs;
    }
  }
  return total / pairs;
}

ImgSimResult SimOf(const std::vector<std::vector<float>>& vs) {
  std::vector<std::span<const float>> spans(vs.begin(), vs.end());
  return ImgSim(spans);
}

Lexicon TinyLexicon() {
  const LexiconEntry entries[] = {
      {"dog", 600, 610, 4.9, WordType::kNoun, 100},
      {"idea", 400, 300, 1.5, WordType::kNoun, 50},
      {"the", std::nullopt, std::nullopt, 1.4, WordType::kOther, 9000},
      {"run", std::nullopt, std::nullopt, std::nullopt, WordType::kVerb, 10},
  };
  return Merge(entries);
}

TEST(AveClipTest, MeanOfScores) {
  const float scores[] = {20.0f, 30.0f, 40.0f};
  EXPECT_DOUBLE_EQ(*AveClip(scores), 30.0);
  EXPECT_FALSE(AveClip(std::span<const float>()));
}

TEST(ImgSimTest, KnownValue) {
  const auto r = SimOf({{1, 0}, {0, 1}, {1, 1}});
  EXPECT_NEAR(*r.value, (0.0 + 2.0 / std::sqrt(2.0)) / 3.0, 1e-12);
  EXPECT_NEAR(*r.value, 0.4714, 1e-4);
  EXPECT_EQ(r.used, 3u);
}

TEST(ImgSimTest, ZeroNormAndDegenerateInputs) {
  const auto r = SimOf({{1, 0}, {0, 0}, {1, 0}});
  EXPECT_DOUBLE_EQ(*r.value, 1.0);
  EXPECT_EQ(r.zero_norm_excluded, 1u);
  EXPECT_FALSE(SimOf({{1, 0}}).value);
  EXPECT_FALSE(SimOf({{1, 0}, {0, 0}}).value);
  EXPECT_FALSE(SimOf({}).value);
}

TEST(ImgSimTest, MatchesReferenceAndStaysInRange) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng.Bounded(19);
    const size_t dim = 1 + rng.Bounded(16);
    std::vector<std::vector<float>> vs;
    for (size_t i = 0; i < n; ++i) vs.push_back(RandomVector(rng, dim));
    const auto r = SimOf(vs);
    ASSERT_TRUE(r.value);
    EXPECT_NEAR(*r.value, static_cast<double>(ReferenceImgSim(vs)), 1e-10);
    EXPECT_GE(*r.value, -1.0);
    EXPECT_LE(*r.value, 1.0);
  }
}

TEST(ImgSimTest, IdenticalVectorsGiveOne) {
  const std::vector<float> v = {0.3f, -1.7f, 2.2f};
  EXPECT_NEAR(*SimOf({v, v, v, v}).value, 1.0, 1e-12);
}

TEST(BowTest, ImageabilityAveragesFoundWords) {
  const Lexicon lexicon = TinyLexicon();
  const BowResult r = BowImageability("The dog, the idea and zebras.", lexicon);
  EXPECT_EQ(r.total, 6u);
  EXPECT_EQ(r.found, 2u);
  EXPECT_DOUBLE_EQ(*r.value, 500.0);
  EXPECT_FALSE(BowImageability("run the zebra", lexicon).value);
  EXPECT_EQ(*BowImageability("Dogs", lexicon).value, 600.0);
}

TEST(BowTest, ConcretenessDividesByAllTokens) {
  const Lexicon lexicon = TinyLexicon();
  const BowResult r = BowConcreteness("the dog runs fast", lexicon);
  EXPECT_EQ(r.found, 2u);
  EXPECT_DOUBLE_EQ(*r.value, (1.4 + 4.9) / 4.0);
  EXPECT_DOUBLE_EQ(*BowConcreteness("zebra quux", lexicon).value, 0.0);
  EXPECT_FALSE(BowConcreteness("", lexicon).value);
}

TEST(BowTest, WordOrderDoesNotChangeTheValue) {
  const Lexicon& lexicon = testing::FixtureLexicon();
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const std::string line = testing::RandomLine(rng);
    auto tokens = Tokenize(line);
    std::reverse(tokens.begin(), tokens.end());
    const std::string reversed = Detokenize(tokens);
    EXPECT_EQ(BowImageability(line, lexicon).value,
              BowImageability(reversed, lexicon).value);
    EXPECT_EQ(BowConcreteness(line, lexicon).value,
              BowConcreteness(reversed, lexicon).value);
  }
}

std::vector<std::vector<float>> SixPoints() {
  // Rows 0-2 sit together, rows 3-5 are spread out.
  return {{1.0f, 0.0f, 0.0f}, {0.99f, 0.1f, 0.0f}, {0.99f, 0.0f, 0.1f},
          {0.0f, 1.0f, 0.0f}, {0.0f, 0.0f, 1.0f}, {-1.0f, 0.0f, 0.0f}};
}

TEST(NeighborIndexTest, ExactListsWithLowerIndexTies) {
  const auto points = SixPoints();
  std::vector<std::span<const float>> rows(points.begin(), points.end());
  const NeighborIndex index(rows, 2);
  EXPECT_EQ(index.k(), 2u);
  const auto n0 = index.Neighbors(0);
  EXPECT_EQ(std::vector<uint32_t>(n0.begin(), n0.end()), (std::vector<uint32_t>{1, 2}));
  // Row 3 is orthogonal to rows 4 and 5 and nearly so to 0-2.
  const auto n5 = index.Neighbors(5);
  EXPECT_EQ(std::vector<uint32_t>(n5.begin(), n5.end()), (std::vector<uint32_t>{3, 4}));
  const NeighborIndex wide(rows, 50);
  EXPECT_EQ(wide.k(), 5u);
}

TEST(NeighborIndexTest, RejectsBadInput) {
  const std::vector<std::vector<float>> zero = {{1, 0}, {0, 0}};
  std::vector<std::span<const float>> rows(zero.begin(), zero.end());
  EXPECT_THROW(NeighborIndex(rows, 1), Error);
  EXPECT_THROW(NeighborIndex(rows, 0), Error);
}

TEST(HesselTest, TightClusterScoresTwoAndAHalf) {
  const auto points = SixPoints();
  std::vector<std::span<const float>> rows(points.begin(), points.end());
  const NeighborIndex index(rows, 2);
  const size_t word_rows[] = {0, 1, 2};
  const auto score = HesselWord("w", index, word_rows);
  ASSERT_TRUE(score);
  EXPECT_EQ(score->raw_fraction, 1.0);
  EXPECT_EQ(score->expected_fraction, 0.4);
  EXPECT_EQ(score->normalized, 2.5);
  const size_t one[] = {0};
  EXPECT_FALSE(HesselWord("w", index, one));
}

TEST(HesselTest, RandomWordsAverageOne) {
  Rng rng(2024);
  double total = 0.0;
  constexpr int kTrials = 200;
  for (int t = 0; t < kTrials; ++t) {
    std::vector<std::vector<float>> points;
    for (int i = 0; i < 200; ++i) points.push_back(RandomVector(rng, 8));
    std::vector<std::span<const float>> rows(points.begin(), points.end());
    const NeighborIndex index(rows, 10);
    std::vector<size_t> all(200);
    std::iota(all.begin(), all.end(), 0);
    rng.Shuffle(std::span<size_t>(all));
    total += HesselWord("w", index, std::span(all).first(10))->normalized;
  }
  const double mean = total / kTrials;
  EXPECT_GT(mean, 0.75);
  EXPECT_LT(mean, 1.25);
}

TEST(HesselTest, SentenceDividesByAllTokens) {
  WordScores scores;
  scores["dog"] = {"dog", 0.5, 0.2, 2.5, 3};
  scores["red"] = {"red", 0.1, 0.2, 0.5, 3};
  const BowResult r = HesselSentence("A red dog, Dogs.", scores);
  EXPECT_EQ(r.total, 4u);
  EXPECT_EQ(r.found, 2u);
  EXPECT_DOUBLE_EQ(*r.value, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(*HesselSentence("zebra", scores).value, 0.0);
  EXPECT_FALSE(HesselSentence("", scores).value);
}

ImageStore StoreFor(const std::vector<Prompt>& prompts, uint32_t dim, Rng& rng) {
  ImageStore store(dim);
  for (const Prompt& p : prompts) {
    store.Add(p.id, testing::RandomRecords(rng, p.id, 4, dim));
  }
  return store;
}

TEST(ScoreManifestTest, CoverageAndPooling) {
  std::vector<Prompt> prompts = {MakePrompt("a", "the dog"),
                                 MakePrompt("b", "an idea"),
                                 MakePrompt("c", "the dog idea")};
  Rng rng(8);
  ImageStore store = StoreFor({prompts[0], prompts[1]}, 6, rng);
  Prompt other = MakePrompt("d", "the dog", Corpus::kNews);
  prompts.push_back(other);
  store.Add("d", testing::RandomRecords(rng, "d", 4, 6));

  const ScoreTable table = ScoreManifest(prompts, store, TinyLexicon(), {.k_nn = 3});
  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_EQ(table.coverage.with_images, 3u);
  EXPECT_EQ(table.coverage.missing, std::vector<std::string>{"c"});
  const PromptScores& a = table.rows[0];
  EXPECT_EQ(a.imag_bow, 600.0);
  EXPECT_TRUE(a.ave_clip);
  EXPECT_TRUE(a.img_sim);
  EXPECT_EQ(a.counts.images_used, 4u);
  EXPECT_FALSE(table.rows[2].ave_clip);
  EXPECT_TRUE(table.rows[2].imag_bow);
  // "dog" in the lone news prompt owns every row of its pool: 4 images, 3
  // neighbours each, all hits.
  EXPECT_DOUBLE_EQ(*table.rows[3].hessel_sentence, 2.0 * 1.0 / 2.0);
}

TEST(ScoresFileTest, RoundTripIsExact) {
  PromptScores a;
  a.prompt_id = "x~backward";
  a.corpus = Corpus::kPoems;
  a.deformance = Deformance::kBackward;
  a.origin_id = "x";
  a.imag_bow = 512.0 / 3.0;
  a.hessel_sentence = 0.1 + 0.2;
  a.img_sim = -1e-300;
  a.counts = {7, 3, 2, 16};
  PromptScores b;
  b.prompt_id = "y";
  b.origin_id = "y";
  const std::vector<PromptScores> rows = {a, b};
  const std::string text = SerializeScores(rows, std::vector<std::string>{"knn\t50"});
  EXPECT_EQ(ParseScores(text), rows);
  EXPECT_THROW(ParseScores("x\n"), Error);
  EXPECT_THROW(ParseScores("#scores v1\na\tpoems\n"), Error);
}

TEST(MeasureTest, Names) {
  for (Measure m : kAllMeasures) EXPECT_EQ(MeasureFromName(MeasureName(m)), m);
  EXPECT_FALSE(MeasureFromName("nope"));
}

}  // namespace
}  // namespace imageability
