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

#include "imageability/rng.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "imageability/io.h"
#include "testing.h"

namespace imageability {
namespace {

std::string Joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : " ") + s;
  return out;
}

TEST(RngTest, MatchesReferenceSplitmix64Stream) {
  Rng rng(0);
  EXPECT_EQ(rng.Next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.Next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.Next(), 0x06c45d188009454fULL);
}

TEST(RngTest, Fnv1aKnownValues) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(RngTest, DeriveSeedMatchesReference) {
  EXPECT_EQ(DeriveSeed(42, "poems-0001-001/permuted"), 0x479765821f395ad7ULL);
  EXPECT_NE(DeriveSeed(42, "a"), DeriveSeed(43, "a"));
  EXPECT_NE(DeriveSeed(42, "a"), DeriveSeed(42, "b"));
}

TEST(RngTest, ShuffleGoldenFiles) {
  const auto check = [](const char* golden, std::vector<std::string> items) {
    Rng rng(42);
    rng.Shuffle(std::span<std::string>(items));
    const std::string expected = ReadLines(testing::SourcePath(golden)).at(0);
    EXPECT_EQ(Joined(items), expected) << golden;
  };
  check("tests/data/shuffle_seed42_abc.golden", {"a", "b", "c"});
  check("tests/data/shuffle_seed42_a_to_j.golden",
        {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"});
}

TEST(RngTest, BoundedStaysInRangeAndCoversIt) {
  Rng rng(7);
  std::array<int, 7> seen{};
  for (int i = 0; i < 7000; ++i) {
    const uint64_t v = rng.Bounded(7);
    ASSERT_LT(v, 7u);
    ++seen[v];
  }
  for (int count : seen) EXPECT_GT(count, 800);
}

TEST(RngTest, UniformIsInUnitInterval) {
  Rng rng(3);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(RngTest, GaussianMoments) {
  Rng rng(11);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.Gaussian();
    sum += g;
    sq += g * g;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(RngTest, ShufflePermutesEveryPosition) {
  // Each item should land in each slot roughly equally often.
  std::array<std::array<int, 4>, 4> counts{};
  for (uint64_t seed = 0; seed < 8000; ++seed) {
    std::array<int, 4> items{0, 1, 2, 3};
    Rng rng(seed);
    rng.Shuffle(std::span<int>(items));
    for (int slot = 0; slot < 4; ++slot) ++counts[items[slot]][slot];
  }
  for (const auto& row : counts) {
    for (int c : row) EXPECT_NEAR(c, 2000, 200);
  }
}

}  // namespace
}  // namespace imageability
