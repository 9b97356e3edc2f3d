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

#include <gtest/gtest.h>

#include "imageability/rng.h"
#include "testing.h"

namespace imageability {
namespace {

TEST(TokenizeTest, PeelsTrailingPunctuation) {
  const auto tokens = Tokenize("On bicycles, in carts,");
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[0].surface, "On");
  EXPECT_TRUE(tokens[0].was_capitalized);
  EXPECT_EQ(tokens[1].surface, "bicycles");
  EXPECT_EQ(tokens[1].trailing_punct, ",");
  EXPECT_EQ(tokens[3].surface, "carts");
  EXPECT_EQ(tokens[3].trailing_punct, ",");
  EXPECT_EQ(tokens[3].index, 3u);
}

TEST(TokenizeTest, HyphenatedWordStaysWhole) {
  const auto tokens = Tokenize("motor-cars;");
  ASSERT_EQ(tokens.size(), 1u);
  EXPECT_EQ(tokens[0].surface, "motor-cars");
  EXPECT_EQ(tokens[0].trailing_punct, ";");
}

TEST(TokenizeTest, EmptyAndBlankLines) {
  EXPECT_TRUE(Tokenize("").empty());
  EXPECT_TRUE(Tokenize(" \t ").empty());
}

TEST(TokenizeTest, LeadingPunctuationStaysOnSurface) {
  const auto tokens = Tokenize("(moon) \"Stars!\"");
  ASSERT_EQ(tokens.size(), 2u);
  EXPECT_EQ(tokens[0].surface, "(moon");
  EXPECT_EQ(tokens[0].trailing_punct, ")");
  EXPECT_EQ(tokens[1].surface, "\"Stars");
  EXPECT_EQ(tokens[1].trailing_punct, "!\"");
  EXPECT_TRUE(tokens[1].was_capitalized);
}

TEST(TokenizeTest, EllipsisCharacterIsPeeled) {
  const auto tokens = Tokenize("wait\xE2\x80\xA6");
  ASSERT_EQ(tokens.size(), 1u);
  EXPECT_EQ(tokens[0].surface, "wait");
  EXPECT_EQ(tokens[0].trailing_punct, "\xE2\x80\xA6");
}

TEST(TokenizeTest, PunctuationOnlyPieceIsKept) {
  const auto tokens = Tokenize("yes -- no ...");
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[1].surface, "--");
  EXPECT_EQ(tokens[3].surface, "...");
  EXPECT_EQ(tokens[3].trailing_punct, "");
}

TEST(TokenizeTest, ApostropheInsideWordIsKept) {
  const auto tokens = Tokenize("o'clock dogs'");
  EXPECT_EQ(tokens[0].surface, "o'clock");
  EXPECT_EQ(tokens[1].surface, "dogs");
  EXPECT_EQ(tokens[1].trailing_punct, "'");
}

TEST(TokenizeTest, DetokenizeReconstructsNormalizedInput) {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const std::string line = testing::RandomLine(rng);
    const auto tokens = Tokenize(line);
    EXPECT_EQ(Detokenize(tokens), NormalizeWhitespace(line)) << line;
    for (const Token& t : tokens) EXPECT_FALSE(t.surface.empty());
  }
}

TEST(LookupKeyTest, StripsPunctuationAndLowercases) {
  EXPECT_EQ(LookupKey("Dust"), "dust");
  EXPECT_EQ(LookupKey("(Moon"), "moon");
  EXPECT_EQ(LookupKey("\"bird\""), "bird");
  EXPECT_EQ(LookupKey("motor-cars"), "motor-cars");
  EXPECT_EQ(LookupKey("..."), "");
  EXPECT_EQ(LeadingPunctLength("[\"star"), 2u);
}

TEST(CaseTest, Helpers) {
  EXPECT_TRUE(HasUppercaseInitial("\"The"));
  EXPECT_FALSE(HasUppercaseInitial("the"));
  EXPECT_EQ(CapitalizeInitial("(moon"), "(Moon");
  EXPECT_EQ(LowercaseInitial("Dust"), "dust");
  EXPECT_TRUE(IsCaseExempt("I"));
  EXPECT_TRUE(IsCaseExempt("I'm"));
  EXPECT_TRUE(IsCaseExempt("NASA"));
  EXPECT_FALSE(IsCaseExempt("A"));
  EXPECT_FALSE(IsCaseExempt("The"));
}

TEST(TextTest, SplitCharKeepsEmptyFields) {
  const auto parts = SplitChar("a\t\tb\t", '\t');
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[1], "");
  EXPECT_EQ(parts[3], "");
}

}  // namespace
}  // namespace imageability
