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

#include "imageability/deformance.h"

#include <algorithm>
#include <string>

#include "imageability/error.h"
#include "imageability/io.h"

namespace imageability {
namespace {

void Reindex(std::vector<Token>& tokens) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    tokens[i].index = i;
    tokens[i].was_capitalized = HasUppercaseInitial(tokens[i].surface);
  }
}

std::vector<size_t> ParseIndexList(std::string_view text) {
  std::vector<size_t> out;
  if (text.empty()) return out;
  for (const std::string_view item : SplitChar(text, ',')) {
    const auto value = ParseInt(item);
    if (!value || *value < 0) {
      throw Error(ErrorCode::kMalformedRecord,
                  "bad token index list '" + std::string(text) + "'");
    }
    out.push_back(static_cast<size_t>(*value));
  }
  return out;
}

std::string JoinIndexList(std::span<const size_t> values) {
  std::string out;
  for (const size_t v : values) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

// A replacement candidate must survive tokenization and lookup unchanged.
bool IsCleanWord(std::string_view word) {
  return !word.empty() && !ContainsWhitespace(word) && LookupKey(word) == word;
}

}  // namespace

std::vector<bool> LexiconNounTagger::Tag(std::span<const Token> tokens) const {
  std::vector<bool> tags(tokens.size(), false);
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string key = LookupKey(tokens[i].surface);
    if (key.empty()) continue;
    const LexiconEntry* entry = lexicon_.Lookup(key, /*plural_fallback=*/true);
    tags[i] = entry != nullptr && entry->word_type == WordType::kNoun;
  }
  return tags;
}

std::vector<bool> PretaggedNounTagger::Tag(std::span<const Token> tokens) const {
  std::vector<bool> tags(tokens.size(), false);
  for (const size_t i : noun_indices_) {
    if (i < tags.size()) tags[i] = true;
  }
  return tags;
}

std::vector<Token> DeformBackward(std::span<const Token> tokens) {
  std::vector<Token> out(tokens.begin(), tokens.end());
  size_t start = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const bool ends_segment =
        !tokens[i].trailing_punct.empty() || i + 1 == tokens.size();
    if (!ends_segment) continue;
    for (size_t k = start; k <= i; ++k) {
      out[k].surface = tokens[start + i - k].surface;
      out[k].trailing_punct = tokens[k].trailing_punct;
    }
    start = i + 1;
  }
  for (Token& token : out) {
    if (!IsCaseExempt(token.surface)) token.surface = AsciiLower(token.surface);
  }
  if (!out.empty() && tokens.front().was_capitalized) {
    out.front().surface = CapitalizeInitial(out.front().surface);
  }
  Reindex(out);
  return out;
}

std::vector<Token> DeformPermuted(std::span<const Token> tokens, Rng& rng) {
  std::vector<Token> out(tokens.begin(), tokens.end());
  rng.Shuffle(std::span<Token>(out));
  for (size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

std::vector<Token> DeformJustNouns(std::span<const Token> tokens,
                                   const NounTagger& tagger) {
  const std::vector<bool> tags = tagger.Tag(tokens);
  std::vector<Token> out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!tags[i]) continue;
    std::string key = LookupKey(tokens[i].surface);
    if (key.empty()) continue;
    Token token;
    token.surface = std::move(key);
    out.push_back(std::move(token));
  }
  Reindex(out);
  return out;
}

std::vector<Token> DeformReplaceNouns(std::span<const Token> tokens,
                                      const Lexicon& lexicon,
                                      const NounTagger& tagger, Rng& rng,
                                      ReplaceStats* stats) {
  const std::vector<bool> tags = tagger.Tag(tokens);
  std::vector<Token> out(tokens.begin(), tokens.end());
  std::vector<const std::string*> candidates;
  for (size_t i = 0; i < out.size(); ++i) {
    if (!tags[i]) continue;
    const std::string key = LookupKey(out[i].surface);
    const LexiconEntry* entry = lexicon.Find(key);
    if (key.empty() || entry == nullptr || !entry->imageability) continue;

    candidates.clear();
    for (const std::string& word :
         lexicon.WordsWithImageability(*entry->imageability)) {
      if (word != key && IsCleanWord(word)) candidates.push_back(&word);
    }
    if (candidates.empty()) {
      if (stats != nullptr) ++stats->no_alternative;
      continue;
    }
    const std::string& replacement = *candidates[rng.Bounded(candidates.size())];
    const size_t lead = LeadingPunctLength(out[i].surface);
    std::string surface = out[i].surface.substr(0, lead);
    surface += out[i].was_capitalized ? CapitalizeInitial(replacement)
                                      : replacement;
    out[i].surface = std::move(surface);
    if (stats != nullptr) ++stats->replaced;
  }
  return out;
}

uint64_t PromptSeed(uint64_t global_seed, const Prompt& original,
                    Deformance kind) {
  std::string tag = original.id;
  tag += '/';
  tag += DeformanceName(kind);
  return DeriveSeed(global_seed, tag);
}

Prompt DeformPrompt(const Prompt& original, Deformance kind,
                    const Lexicon& lexicon, uint64_t global_seed,
                    DeformStats* stats) {
  if (kind == Deformance::kOriginal) {
    throw Error(ErrorCode::kInvalidArgument,
                "original is not a deformance kind");
  }
  const std::vector<Token> tokens = Tokenize(original.text);
  Rng rng(PromptSeed(global_seed, original, kind));

  const auto pretagged = MetaValue(original.source_meta, "nouns");
  const LexiconNounTagger lexicon_tagger(lexicon);
  const PretaggedNounTagger external_tagger(
      pretagged ? ParseIndexList(*pretagged) : std::vector<size_t>{});
  const NounTagger& tagger =
      pretagged ? static_cast<const NounTagger&>(external_tagger)
                : static_cast<const NounTagger&>(lexicon_tagger);

  Prompt result;
  result.id = original.id + "~" + std::string(DeformanceName(kind));
  result.corpus = original.corpus;
  result.deformance = kind;
  result.origin_id = original.id;
  std::string meta = original.source_meta;

  std::vector<Token> deformed;
  switch (kind) {
    case Deformance::kBackward: {
      std::vector<size_t> breaks;
      if (const auto value = MetaValue(meta, "breaks")) {
        breaks = ParseIndexList(*value);
      }
      breaks.push_back(tokens.size());
      size_t begin = 0;
      for (const size_t raw_end : breaks) {
        const size_t end = std::clamp(raw_end, begin, tokens.size());
        const auto line = DeformBackward(
            std::span<const Token>(tokens).subspan(begin, end - begin));
        deformed.insert(deformed.end(), line.begin(), line.end());
        begin = end;
      }
      Reindex(deformed);
      meta = WithoutMetaValue(meta, "nouns");
      break;
    }
    case Deformance::kPermuted:
      deformed = DeformPermuted(tokens, rng);
      meta = WithoutMetaValue(WithoutMetaValue(meta, "breaks"), "nouns");
      break;
    case Deformance::kJustNouns: {
      deformed = DeformJustNouns(tokens, tagger);
      meta = WithoutMetaValue(WithoutMetaValue(meta, "breaks"), "nouns");
      if (pretagged && !deformed.empty()) {
        std::vector<size_t> all(deformed.size());
        for (size_t i = 0; i < all.size(); ++i) all[i] = i;
        meta = WithMetaValue(meta, "nouns", JoinIndexList(all));
      }
      if (deformed.empty()) {
        meta = WithMetaValue(meta, "empty", "1");
        if (stats != nullptr) ++stats->empty_outputs;
      }
      break;
    }
    case Deformance::kReplacedNouns:
      deformed = DeformReplaceNouns(tokens, lexicon, tagger, rng,
                                    stats ? &stats->replace : nullptr);
      break;
    case Deformance::kOriginal:
      break;
  }
  result.text = Detokenize(deformed);
  result.source_meta = std::move(meta);
  if (stats != nullptr) ++stats->produced;
  return result;
}

std::vector<Prompt> DeformAll(std::span<const Prompt> originals,
                              std::span<const Deformance> kinds,
                              const Lexicon& lexicon, uint64_t global_seed,
                              DeformStats* stats) {
  std::vector<Prompt> out;
  out.reserve(originals.size() * (kinds.size() + 1));
  for (const Prompt& prompt : originals) {
    if (prompt.deformance != Deformance::kOriginal) {
      throw Error(ErrorCode::kInvalidArgument,
                  "deform input must contain only original prompts", prompt.id);
    }
    out.push_back(prompt);
  }
  for (const Deformance kind : kinds) {
    for (const Prompt& prompt : originals) {
      out.push_back(DeformPrompt(prompt, kind, lexicon, global_seed, stats));
    }
  }
  return out;
}

}  // namespace imageability
