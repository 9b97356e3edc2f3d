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

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "imageability/error.h"
#include "imageability/io.h"
#include "imageability/rng.h"
#include "imageability/text.h"

namespace imageability {
namespace {

constexpr std::string_view kManifestMagic = "#manifest v1";

std::string Padded(size_t value, int width) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%0*zu", width, value);
  return buffer;
}

bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }
bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

bool HasForbiddenBytes(std::string_view text) {
  return text.find_first_of("\t\n\r") != std::string_view::npos;
}

}  // namespace

std::string_view CorpusName(Corpus corpus) {
  switch (corpus) {
    case Corpus::kPoems: return "poems";
    case Corpus::kCaptions: return "captions";
    case Corpus::kNews: return "news";
    case Corpus::kMrcWords: return "mrc_words";
  }
  return "unknown";
}

std::optional<Corpus> CorpusFromName(std::string_view name) {
  if (name == "poems") return Corpus::kPoems;
  if (name == "captions") return Corpus::kCaptions;
  if (name == "news") return Corpus::kNews;
  if (name == "mrc_words" || name == "mrc-words") return Corpus::kMrcWords;
  return std::nullopt;
}

std::string_view DeformanceName(Deformance deformance) {
  switch (deformance) {
    case Deformance::kOriginal: return "original";
    case Deformance::kBackward: return "backward";
    case Deformance::kPermuted: return "permuted";
    case Deformance::kJustNouns: return "just_nouns";
    case Deformance::kReplacedNouns: return "replaced_nouns";
  }
  return "unknown";
}

std::optional<Deformance> DeformanceFromName(std::string_view name) {
  if (name == "original") return Deformance::kOriginal;
  if (name == "backward") return Deformance::kBackward;
  if (name == "permuted") return Deformance::kPermuted;
  if (name == "just_nouns" || name == "just-nouns") {
    return Deformance::kJustNouns;
  }
  if (name == "replaced_nouns" || name == "replaced-nouns") {
    return Deformance::kReplacedNouns;
  }
  return std::nullopt;
}

std::optional<std::string> MetaValue(std::string_view meta,
                                     std::string_view key) {
  if (meta.empty()) return std::nullopt;
  for (const std::string_view item : SplitChar(meta, ';')) {
    const size_t eq = item.find('=');
    if (eq != std::string_view::npos && item.substr(0, eq) == key) {
      return std::string(item.substr(eq + 1));
    }
  }
  return std::nullopt;
}

std::string WithoutMetaValue(std::string_view meta, std::string_view key) {
  std::string out;
  if (meta.empty()) return out;
  for (const std::string_view item : SplitChar(meta, ';')) {
    if (item.empty()) continue;
    const size_t eq = item.find('=');
    if (item.substr(0, eq) == key) continue;
    if (!out.empty()) out += ';';
    out += item;
  }
  return out;
}

std::string WithMetaValue(std::string_view meta, std::string_view key,
                          std::string_view value) {
  std::string out = WithoutMetaValue(meta, key);
  if (!out.empty()) out += ';';
  out += key;
  out += '=';
  out += value;
  return out;
}

std::vector<std::vector<std::string>> SplitPoems(std::string_view content) {
  std::vector<std::vector<std::string>> poems;
  std::vector<std::string> current;
  for (const std::string& raw : SplitLines(content)) {
    std::string line = NormalizeWhitespace(raw);
    if (line.empty()) {
      if (!current.empty()) poems.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.push_back(std::move(line));
  }
  if (!current.empty()) poems.push_back(std::move(current));
  return poems;
}

std::vector<Prompt> PairPoemLines(std::span<const std::string> poem,
                                  size_t poem_index) {
  std::vector<std::pair<size_t, std::string>> lines;  // (1-based line, text)
  for (size_t i = 0; i < poem.size(); ++i) {
    std::string line = NormalizeWhitespace(poem[i]);
    if (!line.empty()) lines.emplace_back(i + 1, std::move(line));
  }

  std::vector<Prompt> prompts;
  for (size_t i = 0; i < lines.size(); i += 2) {
    Prompt prompt;
    prompt.id = "poems-" + Padded(poem_index, 4) + "-" + Padded(i / 2, 3);
    prompt.corpus = Corpus::kPoems;
    prompt.origin_id = prompt.id;
    prompt.text = lines[i].second;
    std::string meta = "poem=" + std::to_string(poem_index) +
                       ";lines=" + std::to_string(lines[i].first);
    if (i + 1 < lines.size()) {
      const size_t first_tokens = Tokenize(lines[i].second).size();
      prompt.text += ' ';
      prompt.text += lines[i + 1].second;
      meta += "-" + std::to_string(lines[i + 1].first) +
              ";breaks=" + std::to_string(first_tokens);
    }
    prompt.source_meta = std::move(meta);
    prompts.push_back(std::move(prompt));
  }
  return prompts;
}

std::vector<Prompt> FilterCaptions(std::span<const std::string> captions) {
  std::vector<Prompt> prompts;
  for (size_t i = 0; i < captions.size(); ++i) {
    const std::string& caption = captions[i];
    if (caption.find("<PERSON>") != std::string::npos ||
        caption.find('#') != std::string::npos) {
      continue;
    }
    Prompt prompt;
    prompt.id = "captions-" + Padded(i + 1, 6);
    prompt.corpus = Corpus::kCaptions;
    prompt.origin_id = prompt.id;
    prompt.text = caption;
    prompt.source_meta = "line=" + std::to_string(i + 1);
    prompts.push_back(std::move(prompt));
  }
  return prompts;
}

std::vector<std::string> RuleSentenceSplitter::Split(
    std::string_view text) const {
  std::vector<std::string> sentences;
  size_t start = 0;
  size_t i = 0;
  const auto emit = [&](size_t end) {
    std::string sentence = NormalizeWhitespace(text.substr(start, end - start));
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    size_t end = i + 1;
    while (end < text.size() &&
           (text[end] == '.' || text[end] == '!' || text[end] == '?' ||
            text[end] == '"' || text[end] == '\'' || text[end] == ')' ||
            text[end] == ']')) {
      ++end;
    }
    size_t next = end;
    while (next < text.size() && IsSpace(text[next])) ++next;
    if (next == end || next >= text.size()) {
      i = end;
      continue;
    }
    size_t probe = next;
    while (probe < text.size() &&
           (text[probe] == '"' || text[probe] == '\'' || text[probe] == '(' ||
            text[probe] == '[')) {
      ++probe;
    }
    if (probe < text.size() && IsUpper(text[probe])) {
      emit(end);
      start = next;
    }
    i = next;
  }
  if (start < text.size()) emit(text.size());
  return sentences;
}

SampleResult SampleNewsSentences(std::span<const std::string> articles,
                                 size_t n, uint64_t seed,
                                 const SentenceSplitter& splitter) {
  std::vector<Prompt> eligible;
  std::unordered_set<std::string> seen;
  for (size_t a = 0; a < articles.size(); ++a) {
    const std::vector<std::string> sentences = splitter.Split(articles[a]);
    for (size_t s = 0; s < sentences.size(); ++s) {
      const size_t count = Tokenize(sentences[s]).size();
      if (count < kMinSentenceTokens || count > kMaxSentenceTokens) continue;
      if (!seen.insert(sentences[s]).second) continue;
      Prompt prompt;
      prompt.id = "news-" + Padded(a + 1, 6) + "-" + Padded(s + 1, 3);
      prompt.corpus = Corpus::kNews;
      prompt.origin_id = prompt.id;
      prompt.text = sentences[s];
      prompt.source_meta =
          "article=" + std::to_string(a + 1) + ";sentence=" +
          std::to_string(s + 1);
      eligible.push_back(std::move(prompt));
    }
  }
  SampleResult result;
  result.eligible = eligible.size();
  result.requested = n;
  result.shortfall = eligible.size() < n;
  result.prompts = SamplePrompts(std::move(eligible), n, seed);
  return result;
}

std::vector<Prompt> DeduplicateByText(std::vector<Prompt> prompts) {
  std::unordered_set<std::string> seen;
  std::vector<Prompt> out;
  out.reserve(prompts.size());
  for (Prompt& prompt : prompts) {
    if (seen.insert(prompt.text).second) out.push_back(std::move(prompt));
  }
  return out;
}

std::vector<Prompt> SamplePrompts(std::vector<Prompt> prompts, size_t n,
                                  uint64_t seed) {
  if (n >= prompts.size()) return prompts;
  std::vector<size_t> order(prompts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  // Partial Fisher-Yates: the first n slots become a uniform n-subset.
  for (size_t i = 0; i < n; ++i) {
    const size_t j = i + static_cast<size_t>(rng.Bounded(order.size() - i));
    std::swap(order[i], order[j]);
  }
  order.resize(n);
  std::sort(order.begin(), order.end());
  std::vector<Prompt> out;
  out.reserve(n);
  for (const size_t i : order) out.push_back(std::move(prompts[i]));
  return out;
}

std::vector<Prompt> WordsAsPrompts(const Lexicon& lexicon) {
  std::vector<Prompt> prompts;
  for (const auto& [word, entry] : lexicon.entries()) {
    if (!entry.imageability) continue;
    Prompt prompt;
    prompt.id = word;
    prompt.corpus = Corpus::kMrcWords;
    prompt.origin_id = word;
    prompt.text = word;
    prompts.push_back(std::move(prompt));
  }
  return prompts;
}

std::string SerializeManifest(std::span<const Prompt> prompts,
                              std::span<const std::string> header_lines) {
  std::string out(kManifestMagic);
  out += '\n';
  for (const std::string& line : header_lines) {
    out += '#';
    out += line;
    out += '\n';
  }
  for (const Prompt& prompt : prompts) {
    for (const std::string_view field :
         {std::string_view(prompt.id), std::string_view(prompt.origin_id),
          std::string_view(prompt.source_meta), std::string_view(prompt.text)}) {
      if (HasForbiddenBytes(field)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "manifest fields may not contain tabs or newlines",
                    prompt.id);
      }
    }
    if (prompt.id.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "prompt id is empty");
    }
    out += prompt.id;
    out += '\t';
    out += CorpusName(prompt.corpus);
    out += '\t';
    out += DeformanceName(prompt.deformance);
    out += '\t';
    out += prompt.origin_id;
    out += '\t';
    out += prompt.source_meta;
    out += '\t';
    out += prompt.text;
    out += '\n';
  }
  return out;
}

std::vector<Prompt> ParseManifest(std::string_view content,
                                  std::string_view location,
                                  std::vector<std::string>* header_lines) {
  const std::vector<std::string> lines = SplitLines(content);
  const auto where = [&](size_t line_no) {
    return std::string(location) + ":" + std::to_string(line_no);
  };
  if (lines.empty() || lines[0] != kManifestMagic) {
    throw Error(ErrorCode::kBadMagic, "missing '#manifest v1' header",
                where(1));
  }
  std::vector<Prompt> prompts;
  std::unordered_set<std::string> ids;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (line.starts_with('#')) {
      if (header_lines != nullptr) header_lines->push_back(line.substr(1));
      continue;
    }
    const auto fields = SplitChar(line, '\t');
    if (fields.size() != 6) {
      throw Error(ErrorCode::kMalformedRecord,
                  "expected 6 tab-separated fields (text may not contain tabs)",
                  where(i + 1));
    }
    Prompt prompt;
    prompt.id = std::string(fields[0]);
    const auto corpus = CorpusFromName(fields[1]);
    const auto deformance = DeformanceFromName(fields[2]);
    if (prompt.id.empty() || !corpus || !deformance) {
      throw Error(ErrorCode::kMalformedRecord, "bad id, corpus or deformance",
                  where(i + 1));
    }
    prompt.corpus = *corpus;
    prompt.deformance = *deformance;
    prompt.origin_id = std::string(fields[3]);
    prompt.source_meta = std::string(fields[4]);
    prompt.text = std::string(fields[5]);
    if (prompt.deformance == Deformance::kOriginal &&
        prompt.origin_id != prompt.id) {
      throw Error(ErrorCode::kMalformedRecord,
                  "original prompt must be its own origin", where(i + 1));
    }
    if (!ids.insert(prompt.id).second) {
      throw Error(ErrorCode::kMalformedRecord, "duplicate prompt id",
                  where(i + 1));
    }
    prompts.push_back(std::move(prompt));
  }
  std::unordered_map<std::string_view, Corpus> corpus_of;
  for (const Prompt& p : prompts) corpus_of.emplace(p.id, p.corpus);
  for (const Prompt& p : prompts) {
    const auto it = corpus_of.find(p.origin_id);
    if (it != corpus_of.end() && it->second != p.corpus) {
      throw Error(ErrorCode::kMalformedRecord,
                  "prompt and its origin belong to different corpora",
                  std::string(location) + (location.empty() ? "" : ": ") + p.id);
    }
  }
  return prompts;
}

std::vector<Prompt> LoadManifest(const std::filesystem::path& path,
                                 std::vector<std::string>* header_lines) {
  return ParseManifest(ReadFile(path), path.string(), header_lines);
}

void SaveManifest(std::span<const Prompt> prompts,
                  const std::filesystem::path& path,
                  std::span<const std::string> header_lines) {
  AtomicWriteFile(path, SerializeManifest(prompts, header_lines));
}

}  // namespace imageability
