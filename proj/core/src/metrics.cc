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
#include <set>
#include <utility>

#include "imageability/error.h"
#include "imageability/io.h"
#include "imageability/text.h"

namespace imageability {
namespace {

double SortedSum(std::vector<double>& values) {
  // Summing in sorted order makes the result independent of token order.
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

double Norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

double Dot(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += static_cast<double>(a[i]) * b[i];
  return sum;
}

// Unrolled float dot product for the neighbour scan.
float FastDot(const float* a, const float* b, size_t n) {
  float acc[8] = {};
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (size_t j = 0; j < 8; ++j) acc[j] += a[i + j] * b[i + j];
  }
  float sum = ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
              ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

std::vector<std::string> DistinctKeys(std::string_view text) {
  std::set<std::string> keys;
  for (const Token& token : Tokenize(text)) {
    std::string key = LookupKey(token.surface);
    if (!key.empty()) keys.insert(std::move(key));
  }
  return {keys.begin(), keys.end()};
}

std::string FormatCounts(const PromptCounts& c) {
  return std::to_string(c.words_total) + "," + std::to_string(c.words_found_imag) +
         "," + std::to_string(c.words_found_conc) + "," +
         std::to_string(c.images_used);
}

}  // namespace

std::optional<double> AveClip(std::span<const float> clip_scores) {
  if (clip_scores.empty()) return std::nullopt;
  double sum = 0.0;
  for (float s : clip_scores) sum += s;
  return sum / static_cast<double>(clip_scores.size());
}

std::optional<double> AveClip(std::span<const ImageRecord> records) {
  std::vector<float> scores;
  scores.reserve(records.size());
  for (const ImageRecord& r : records) scores.push_back(r.clip_score);
  return AveClip(scores);
}

double CosineSimilarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "cosine of vectors of unequal length");
  }
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "cosine of a zero-norm vector");
  }
  return Dot(a, b) / (na * nb);
}

ImgSimResult ImgSim(std::span<const std::span<const float>> embeddings) {
  ImgSimResult result;
  std::vector<std::span<const float>> kept;
  std::vector<double> norms;
  for (const auto& e : embeddings) {
    const double n = Norm(e);
    if (n == 0.0) {
      ++result.zero_norm_excluded;
      continue;
    }
    if (!kept.empty() && e.size() != kept.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch, "embeddings of unequal length");
    }
    kept.push_back(e);
    norms.push_back(n);
  }
  result.used = kept.size();
  if (kept.size() < 2) return result;
  double sum = 0.0;
  for (size_t x = 0; x < kept.size(); ++x) {
    for (size_t y = x + 1; y < kept.size(); ++y) {
      sum += std::clamp(Dot(kept[x], kept[y]) / (norms[x] * norms[y]), -1.0, 1.0);
    }
  }
  const double pairs = static_cast<double>(kept.size() * (kept.size() - 1) / 2);
  result.value = sum / pairs;
  return result;
}

ImgSimResult ImgSim(std::span<const ImageRecord> records) {
  std::vector<std::span<const float>> views;
  views.reserve(records.size());
  for (const ImageRecord& r : records) views.emplace_back(r.embedding);
  return ImgSim(views);
}

BowResult BowImageability(std::string_view text, const Lexicon& lexicon) {
  BowResult result;
  std::vector<double> values;
  for (const Token& token : Tokenize(text)) {
    ++result.total;
    const LexiconEntry* entry = lexicon.Lookup(LookupKey(token.surface), true);
    if (entry != nullptr && entry->imageability) values.push_back(*entry->imageability);
  }
  result.found = values.size();
  if (!values.empty()) result.value = SortedSum(values) / values.size();
  return result;
}

BowResult BowConcreteness(std::string_view text, const Lexicon& lexicon) {
  BowResult result;
  std::vector<double> values;
  for (const Token& token : Tokenize(text)) {
    ++result.total;
    const LexiconEntry* entry = lexicon.Lookup(LookupKey(token.surface), true);
    if (entry != nullptr && entry->concreteness_brysbaert) {
      values.push_back(*entry->concreteness_brysbaert);
    }
  }
  result.found = values.size();
  if (result.total > 0) result.value = SortedSum(values) / result.total;
  return result;
}

NeighborIndex::NeighborIndex(std::span<const std::span<const float>> rows,
                             size_t k)
    : size_(rows.size()) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k_nn must be at least 1");
  k_ = size_ > 0 ? std::min(k, size_ - 1) : 0;
  if (k_ == 0) return;
  const size_t dim = rows.front().size();

  std::vector<float> unit(size_ * dim);
  for (size_t i = 0; i < size_; ++i) {
    if (rows[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "embeddings of unequal length");
    }
    const double n = Norm(rows[i]);
    if (n == 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "zero-norm embedding in neighbour index");
    }
    for (size_t d = 0; d < dim; ++d) {
      unit[i * dim + d] = static_cast<float>(rows[i][d] / n);
    }
  }

  neighbors_.resize(size_ * k_);
  std::vector<std::pair<float, uint32_t>> candidates(size_ - 1);
  for (size_t i = 0; i < size_; ++i) {
    size_t c = 0;
    for (size_t j = 0; j < size_; ++j) {
      if (j == i) continue;
      // Negated similarity so that ascending order is nearest first.
      candidates[c++] = {-FastDot(&unit[i * dim], &unit[j * dim], dim),
                         static_cast<uint32_t>(j)};
    }
    std::partial_sort(candidates.begin(), candidates.begin() + k_, candidates.end());
    for (size_t n = 0; n < k_; ++n) neighbors_[i * k_ + n] = candidates[n].second;
  }
}

std::optional<WordConcreteness> HesselWord(std::string_view word,
                                           const NeighborIndex& index,
                                           std::span<const size_t> word_rows) {
  if (word_rows.size() < 2 || index.k() == 0) return std::nullopt;
  std::vector<bool> member(index.size(), false);
  for (size_t row : word_rows) {
    if (row >= index.size()) {
      throw Error(ErrorCode::kInvalidArgument, "word row outside the collection");
    }
    member[row] = true;
  }
  double total = 0.0;
  for (size_t row : word_rows) {
    size_t hits = 0;
    for (uint32_t n : index.Neighbors(row)) hits += member[n] ? 1 : 0;
    total += static_cast<double>(hits) / static_cast<double>(index.k());
  }
  WordConcreteness result;
  result.word = std::string(word);
  result.images = word_rows.size();
  result.raw_fraction = total / static_cast<double>(word_rows.size());
  result.expected_fraction = static_cast<double>(word_rows.size() - 1) /
                             static_cast<double>(index.size() - 1);
  result.normalized = result.raw_fraction / result.expected_fraction;
  return result;
}

BowResult HesselSentence(std::string_view text, const WordScores& word_scores) {
  BowResult result;
  std::vector<double> values;
  for (const Token& token : Tokenize(text)) {
    ++result.total;
    const auto it = word_scores.find(LookupKey(token.surface));
    if (it != word_scores.end()) values.push_back(it->second.normalized);
  }
  result.found = values.size();
  if (result.total > 0) result.value = SortedSum(values) / result.total;
  return result;
}

WordScores ScoreWordsByImages(std::span<const Prompt* const> prompts,
                              const ImageStore& store, size_t k_nn) {
  std::vector<std::span<const float>> rows;
  std::map<std::string, std::vector<size_t>> assoc;
  for (const Prompt* prompt : prompts) {
    const auto slice = store.Find(prompt->id);
    if (!slice) continue;
    const std::vector<std::string> keys = DistinctKeys(prompt->text);
    for (size_t r = 0; r < slice->count; ++r) {
      const auto embedding = store.Embedding(slice->offset + r);
      if (Norm(embedding) == 0.0) continue;
      for (const std::string& key : keys) assoc[key].push_back(rows.size());
      rows.push_back(embedding);
    }
  }
  WordScores scores;
  if (rows.size() < 2) return scores;
  const NeighborIndex index(rows, k_nn);
  for (const auto& [word, word_rows] : assoc) {
    if (auto score = HesselWord(word, index, word_rows)) {
      scores.emplace(word, std::move(*score));
    }
  }
  return scores;
}

std::string_view MeasureName(Measure measure) {
  switch (measure) {
    case Measure::kImagBow: return "imag_bow";
    case Measure::kConcBow: return "conc_bow";
    case Measure::kHessel: return "hessel_sentence";
    case Measure::kAveClip: return "ave_clip";
    case Measure::kImgSim: return "img_sim";
  }
  return "unknown";
}

std::optional<Measure> MeasureFromName(std::string_view name) {
  for (Measure m : kAllMeasures) {
    if (MeasureName(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<double> MeasureValue(const PromptScores& scores, Measure measure) {
  switch (measure) {
    case Measure::kImagBow: return scores.imag_bow;
    case Measure::kConcBow: return scores.conc_bow;
    case Measure::kHessel: return scores.hessel_sentence;
    case Measure::kAveClip: return scores.ave_clip;
    case Measure::kImgSim: return scores.img_sim;
  }
  return std::nullopt;
}

ScoreTable ScoreManifest(std::span<const Prompt> prompts,
                         const ImageStore& store, const Lexicon& lexicon,
                         const ScoreOptions& options) {
  ScoreTable table;
  table.coverage.prompts = prompts.size();

  std::map<std::pair<Corpus, Deformance>, std::vector<const Prompt*>> pools;
  for (const Prompt& p : prompts) pools[{p.corpus, p.deformance}].push_back(&p);
  std::map<std::pair<Corpus, Deformance>, WordScores> pooled;
  for (const auto& [key, members] : pools) {
    pooled[key] = ScoreWordsByImages(members, store, options.k_nn);
  }

  table.rows.reserve(prompts.size());
  for (const Prompt& p : prompts) {
    PromptScores s;
    s.prompt_id = p.id;
    s.corpus = p.corpus;
    s.deformance = p.deformance;
    s.origin_id = p.origin_id;

    const BowResult imag = BowImageability(p.text, lexicon);
    const BowResult conc = BowConcreteness(p.text, lexicon);
    const BowResult hessel = HesselSentence(p.text, pooled[{p.corpus, p.deformance}]);
    s.imag_bow = imag.value;
    s.conc_bow = conc.value;
    s.hessel_sentence = hessel.value;
    s.counts.words_total = imag.total;
    s.counts.words_found_imag = imag.found;
    s.counts.words_found_conc = conc.found;

    if (const auto slice = store.Find(p.id)) {
      ++table.coverage.with_images;
      std::vector<std::span<const float>> embeddings;
      for (size_t r = 0; r < slice->count; ++r) {
        embeddings.push_back(store.Embedding(slice->offset + r));
      }
      s.ave_clip = AveClip(store.clip_scores().subspan(slice->offset, slice->count));
      const ImgSimResult sim = ImgSim(embeddings);
      s.img_sim = sim.value;
      s.counts.images_used = slice->count;
      table.coverage.zero_norm_excluded += sim.zero_norm_excluded;
    } else {
      table.coverage.missing.push_back(p.id);
    }
    table.rows.push_back(std::move(s));
  }
  return table;
}

std::string SerializeScores(std::span<const PromptScores> rows,
                            std::span<const std::string> header_lines) {
  std::string out = "#scores v1\n";
  for (const std::string& line : header_lines) {
    out += '#';
    out += line;
    out += '\n';
  }
  for (const PromptScores& s : rows) {
    out += s.prompt_id;
    out += '\t';
    out += CorpusName(s.corpus);
    out += '\t';
    out += DeformanceName(s.deformance);
    out += '\t';
    out += s.origin_id;
    for (Measure m : kAllMeasures) {
      out += '\t';
      out += FormatOptional(MeasureValue(s, m));
    }
    out += '\t';
    out += FormatCounts(s.counts);
    out += '\n';
  }
  return out;
}

std::vector<PromptScores> ParseScores(std::string_view content,
                                      std::string_view location) {
  const std::vector<std::string> lines = SplitLines(content);
  const std::string where(location);
  if (lines.empty() || lines.front() != "#scores v1") {
    throw Error(ErrorCode::kBadMagic, "missing '#scores v1' header", where);
  }
  std::vector<PromptScores> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    const std::string at = where + ":" + std::to_string(i + 1);
    const auto fields = SplitChar(line, '\t');
    if (fields.size() != 10) {
      throw Error(ErrorCode::kMalformedRecord,
                  "expected 10 fields, got " + std::to_string(fields.size()), at);
    }
    PromptScores s;
    s.prompt_id = std::string(fields[0]);
    const auto corpus = CorpusFromName(fields[1]);
    const auto deformance = DeformanceFromName(fields[2]);
    if (s.prompt_id.empty() || !corpus || !deformance) {
      throw Error(ErrorCode::kMalformedRecord, "bad id, corpus or deformance", at);
    }
    s.corpus = *corpus;
    s.deformance = *deformance;
    s.origin_id = std::string(fields[3]);
    std::optional<double>* slots[] = {&s.imag_bow, &s.conc_bow, &s.hessel_sentence,
                                      &s.ave_clip, &s.img_sim};
    for (size_t m = 0; m < 5; ++m) {
      const std::string_view f = fields[4 + m];
      if (f.empty()) continue;
      *slots[m] = ParseDouble(f);
      if (!*slots[m]) {
        throw Error(ErrorCode::kMalformedRecord,
                    "bad number '" + std::string(f) + "'", at);
      }
    }
    const auto counts = SplitChar(fields[9], ',');
    size_t* count_slots[] = {&s.counts.words_total, &s.counts.words_found_imag,
                             &s.counts.words_found_conc, &s.counts.images_used};
    if (counts.size() != 4) {
      throw Error(ErrorCode::kMalformedRecord, "counts need four values", at);
    }
    for (size_t c = 0; c < 4; ++c) {
      const auto v = ParseInt(counts[c]);
      if (!v || *v < 0) throw Error(ErrorCode::kMalformedRecord, "bad count", at);
      *count_slots[c] = static_cast<size_t>(*v);
    }
    rows.push_back(std::move(s));
  }
  return rows;
}

std::vector<PromptScores> LoadScores(const std::filesystem::path& path) {
  return ParseScores(ReadFile(path), path.string());
}

}  // namespace imageability
