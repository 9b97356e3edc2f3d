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

#ifndef IMAGEABILITY_DEFORMANCE_H_
#define IMAGEABILITY_DEFORMANCE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "imageability/corpus.h"
#include "imageability/lexicon.h"
#include "imageability/rng.h"
#include "imageability/text.h"

namespace imageability {

class NounTagger {
 public:
  virtual ~NounTagger() = default;
  // One flag per token.
  virtual std::vector<bool> Tag(std::span<const Token> tokens) const = 0;
};

// A token is a noun iff its lookup key resolves (plural fallback on) to a
// lexicon entry whose word_type is noun.
class LexiconNounTagger : public NounTagger {
 public:
  explicit LexiconNounTagger(const Lexicon& lexicon) : lexicon_(lexicon) {}
  std::vector<bool> Tag(std::span<const Token> tokens) const override;

 private:
  const Lexicon& lexicon_;
};

// Adapter for tags produced by an external tagger, given as token indices
// (the "nouns=" manifest meta key).
class PretaggedNounTagger : public NounTagger {
 public:
  explicit PretaggedNounTagger(std::vector<size_t> noun_indices)
      : noun_indices_(std::move(noun_indices)) {}
  std::vector<bool> Tag(std::span<const Token> tokens) const override;

 private:
  std::vector<size_t> noun_indices_;
};

// Reverses word order inside punctuation-delimited segments of one line.
// Punctuation stays at its slot; all words are lowercased (except "I" and
// acronyms) and the first slot is capitalized iff the input's first token
// was.
std::vector<Token> DeformBackward(std::span<const Token> tokens);

// Fisher-Yates shuffle of whole tokens (punctuation and case travel along).
std::vector<Token> DeformPermuted(std::span<const Token> tokens, Rng& rng);

// Nouns only, in order, reduced to their lowercase lookup key. May be empty.
std::vector<Token> DeformJustNouns(std::span<const Token> tokens,
                                   const NounTagger& tagger);

struct ReplaceStats {
  size_t replaced = 0;
  size_t no_alternative = 0;
};

// Swaps every noun whose exact lookup key has an imageability rating for a
// different word with the same rating, chosen uniformly. Plurals that miss
// exact lookup are left alone. Slot punctuation and capitalization are kept.
std::vector<Token> DeformReplaceNouns(std::span<const Token> tokens,
                                      const Lexicon& lexicon,
                                      const NounTagger& tagger, Rng& rng,
                                      ReplaceStats* stats = nullptr);

struct DeformStats {
  size_t produced = 0;
  size_t empty_outputs = 0;
  ReplaceStats replace;
};

// Seed of the per-prompt stream: depends only on the global seed, the
// prompt id and the deformance, so prompts can be processed in any order.
uint64_t PromptSeed(uint64_t global_seed, const Prompt& original,
                    Deformance kind);

// Applies `kind` to an original prompt. Backward runs per source line (see
// the "breaks" meta key). The result links back through origin_id.
Prompt DeformPrompt(const Prompt& original, Deformance kind,
                    const Lexicon& lexicon, uint64_t global_seed,
                    DeformStats* stats = nullptr);

// Originals first, then each kind's deformed prompts in input order.
std::vector<Prompt> DeformAll(std::span<const Prompt> originals,
                              std::span<const Deformance> kinds,
                              const Lexicon& lexicon, uint64_t global_seed,
                              DeformStats* stats = nullptr);

}  // namespace imageability

#endif  // IMAGEABILITY_DEFORMANCE_H_
