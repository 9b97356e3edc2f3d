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

#include "imageability/corpus.h"

#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "imageability/error.h"
#include "imageability/text.h"
#include "testing.h"

namespace imageability {
namespace {

using ::imageability::testing::MakePrompt;

TEST(NamesTest, RoundTripAndCliSpellings) {
  for (Corpus c : {Corpus::kPoems, Corpus::kCaptions, Corpus::kNews,
                   Corpus::kMrcWords}) {
    EXPECT_EQ(CorpusFromName(CorpusName(c)), c);
  }
  EXPECT_EQ(CorpusFromName("mrc-words"), Corpus::kMrcWords);
  EXPECT_EQ(DeformanceFromName("just-nouns"), Deformance::kJustNouns);
  EXPECT_EQ(DeformanceName(Deformance::kReplacedNouns), "replaced_nouns");
  EXPECT_FALSE(CorpusFromName("tweets"));
}

TEST(MetaTest, GetSetRemove) {
  std::string meta = "poem=3;lines=5-6";
  EXPECT_EQ(MetaValue(meta, "lines"), "5-6");
  EXPECT_FALSE(MetaValue(meta, "line"));
  meta = WithMetaValue(meta, "breaks", "7");
  EXPECT_EQ(MetaValue(meta, "breaks"), "7");
  meta = WithMetaValue(meta, "poem", "4");
  EXPECT_EQ(MetaValue(meta, "poem"), "4");
  meta = WithoutMetaValue(meta, "lines");
  EXPECT_FALSE(MetaValue(meta, "lines"));
  EXPECT_EQ(MetaValue(meta, "breaks"), "7");
}

TEST(PoemsTest, PairsLinesAndKeepsOddTail) {
  const std::vector<std::string> poem = {"one two", "three", "", "four five",
                                         "six", "seven"};
  const auto prompts = PairPoemLines(poem, 2);
  ASSERT_EQ(prompts.size(), 3u);
  EXPECT_EQ(prompts[0].text, "one two three");
  EXPECT_EQ(prompts[1].text, "four five six");
  EXPECT_EQ(prompts[2].text, "seven");
  EXPECT_EQ(prompts[0].id, "poems-0002-000");
  EXPECT_EQ(MetaValue(prompts[0].source_meta, "breaks"), "2");
  EXPECT_EQ(MetaValue(prompts[1].source_meta, "lines"), "4-5");
  EXPECT_FALSE(MetaValue(prompts[2].source_meta, "breaks"));
  for (const Prompt& p : prompts) {
    EXPECT_EQ(p.origin_id, p.id);
    EXPECT_EQ(p.corpus, Corpus::kPoems);
  }
}

TEST(PoemsTest, SplitsOnBlankLines) {
  const auto poems = SplitPoems("a\nb\n\n\nc\n  \nd\ne\n");
  ASSERT_EQ(poems.size(), 3u);
  EXPECT_EQ(poems[2].size(), 2u);
}

TEST(PoemsTest, PairCountProperty) {
  for (size_t n = 0; n < 40; ++n) {
    std::vector<std::string> poem;
    for (size_t i = 0; i < n; ++i) poem.push_back("line " + std::to_string(i));
    EXPECT_EQ(PairPoemLines(poem).size(), (n + 1) / 2);
  }
}

TEST(CaptionsTest, DropsPersonAndHashLines) {
  const std::vector<std::string> captions = {
      "A dog on a beach.", "<PERSON> walking a dog", "Sunset #nofilter",
      "A red bicycle."};
  const auto prompts = FilterCaptions(captions);
  ASSERT_EQ(prompts.size(), 2u);
  EXPECT_EQ(prompts[0].id, "captions-000001");
  EXPECT_EQ(prompts[1].id, "captions-000004");
}

TEST(CaptionsTest, DeduplicateKeepsFirst) {
  std::vector<Prompt> prompts = {MakePrompt("a", "x y"), MakePrompt("b", "z"),
                                 MakePrompt("c", "x y")};
  const auto kept = DeduplicateByText(prompts);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].id, "a");
  EXPECT_EQ(kept[1].id, "b");
}

std::string Words(size_t n, std::string_view first = "The") {
  std::string out(first);
  for (size_t i = 1; i < n; ++i) out += " w" + std::to_string(i);
  return out + ".";
}

TEST(NewsTest, LengthBoundaries) {
  const std::string article =
      Words(9) + " " + Words(10, "Ten") + " " + Words(30, "Thirty") + " " +
      Words(31, "Long");
  const std::vector<std::string> articles = {article};
  const SampleResult result = SampleNewsSentences(articles, 10, 1);
  EXPECT_EQ(result.eligible, 2u);
  ASSERT_EQ(result.prompts.size(), 2u);
  EXPECT_TRUE(result.shortfall);
  EXPECT_TRUE(result.prompts[0].text.starts_with("Ten "));
  EXPECT_TRUE(result.prompts[1].text.starts_with("Thirty "));
  EXPECT_EQ(result.prompts[0].corpus, Corpus::kNews);
}

TEST(NewsTest, SplitterRules) {
  const RuleSentenceSplitter splitter;
  const auto s = splitter.Split(
      "He left. She stayed! \"Why?\" asked Tom. e.g. this one. Next");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], "He left.");
  EXPECT_EQ(s[1], "She stayed!");
  EXPECT_EQ(s[2], "\"Why?\" asked Tom. e.g. this one.");
  EXPECT_EQ(s[3], "Next");
}

TEST(NewsTest, SampleIsDeterministicDistinctAndOrdered) {
  std::vector<std::string> articles;
  for (int a = 0; a < 5; ++a) {
    std::string article;
    for (int s = 0; s < 10; ++s) {
      article += "Sentence " + std::to_string(a) + " " + std::to_string(s) +
                 " has exactly ten tokens in it now. ";
    }
    articles.push_back(article);
  }
  articles.push_back(articles[0]);  // duplicates do not count twice
  const auto a = SampleNewsSentences(articles, 20, 7);
  const auto b = SampleNewsSentences(articles, 20, 7);
  EXPECT_EQ(a.eligible, 50u);
  ASSERT_EQ(a.prompts.size(), 20u);
  EXPECT_EQ(a.prompts, b.prompts);
  EXPECT_FALSE(a.shortfall);
  std::set<std::string> texts;
  for (size_t i = 0; i < a.prompts.size(); ++i) {
    EXPECT_TRUE(texts.insert(a.prompts[i].text).second);
    EXPECT_EQ(Tokenize(a.prompts[i].text).size(), 10u);
    if (i > 0) EXPECT_LT(a.prompts[i - 1].id, a.prompts[i].id);
  }
  EXPECT_NE(SampleNewsSentences(articles, 20, 8).prompts, a.prompts);
}

TEST(SampleTest, KeepsOrderAndAll) {
  std::vector<Prompt> prompts;
  for (int i = 0; i < 100; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "p%03d", i);
    prompts.push_back(MakePrompt(id, "t" + std::to_string(i)));
  }
  const auto sample = SamplePrompts(prompts, 30, 5);
  ASSERT_EQ(sample.size(), 30u);
  for (size_t i = 1; i < sample.size(); ++i) {
    EXPECT_LT(sample[i - 1].id, sample[i].id);
  }
  EXPECT_EQ(SamplePrompts(prompts, 30, 5), sample);
  EXPECT_EQ(SamplePrompts(prompts, 500, 5).size(), 100u);
}

TEST(WordsTest, OnlyRatedWords) {
  const Lexicon& lexicon = testing::FixtureLexicon();
  const auto prompts = WordsAsPrompts(lexicon);
  size_t rated = 0;
  for (const auto& [word, entry] : lexicon.entries()) {
    if (entry.imageability) ++rated;
  }
  ASSERT_EQ(prompts.size(), rated);
  for (const Prompt& p : prompts) {
    EXPECT_EQ(p.id, p.text);
    EXPECT_EQ(p.corpus, Corpus::kMrcWords);
  }
}

TEST(ManifestTest, RoundTrip) {
  std::vector<Prompt> prompts = {MakePrompt("a", "A dog, running."),
                                 MakePrompt("b", "")};
  Prompt deformed = MakePrompt("a/backward", "Running dog, a.");
  deformed.deformance = Deformance::kBackward;
  deformed.origin_id = "a";
  deformed.source_meta = "line=1";
  prompts.push_back(deformed);
  const std::vector<std::string> header = {"config\t{\"seed\":1}"};
  const std::string text = SerializeManifest(prompts, header);
  std::vector<std::string> header_back;
  EXPECT_EQ(ParseManifest(text, "m", &header_back), prompts);
  EXPECT_EQ(header_back, header);
}

TEST(ManifestTest, RejectsBadInput) {
  const auto code_of = [](std::string_view text) {
    try {
      ParseManifest(text, "m");
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code_of("id\tcaptions\toriginal\tid\t\tx\n"), ErrorCode::kBadMagic);
  EXPECT_EQ(code_of("#manifest v1\na\tcaptions\toriginal\ta\tx\n"),
            ErrorCode::kMalformedRecord);
  EXPECT_EQ(code_of("#manifest v1\na\tblogs\toriginal\ta\t\tx\n"),
            ErrorCode::kMalformedRecord);
  EXPECT_EQ(code_of("#manifest v1\na\tcaptions\toriginal\tb\t\tx\n"),
            ErrorCode::kMalformedRecord);
  EXPECT_EQ(code_of("#manifest v1\na\tcaptions\toriginal\ta\t\tx\n"
                    "a\tcaptions\toriginal\ta\t\ty\n"),
            ErrorCode::kMalformedRecord);
  EXPECT_EQ(code_of("#manifest v1\na\tcaptions\toriginal\ta\t\tx\n"
                    "a~backward\tnews\tbackward\ta\t\tx\n"),
            ErrorCode::kMalformedRecord);
  Prompt tabbed = MakePrompt("t", "a\tb");
  EXPECT_THROW(SerializeManifest(std::span(&tabbed, 1)), Error);
}

}  // namespace
}  // namespace imageability
