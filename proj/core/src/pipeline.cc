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

#include "imageability/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "imageability/deformance.h"
#include "imageability/image_store.h"
#include "imageability/io.h"
#include "imageability/lexicon.h"
#include "imageability/process_backend.h"
#include "imageability/report.h"
#include "imageability/rng.h"
#include "imageability/text.h"

namespace imageability {
namespace {

using nlohmann::json;

constexpr std::string_view kDefaultLayoutJson = R"({
  "fields": {
    "brown_freq": {"column": 22, "width": 4},
    "concreteness": {"column": 29, "width": 3},
    "imageability": {"column": 32, "width": 3},
    "word_type": {"column": 45, "width": 1}
  },
  "word_column": 52,
  "word_terminator": "|",
  "word_type_codes": {
    "N": "noun", "J": "adjective", "V": "verb", "P": "verb", "A": "adverb",
    "R": "other", "C": "other", "U": "other", "I": "other", "O": "other"
  }
})";

std::string_view AggregationName(Aggregation a) {
  return a == Aggregation::kMeanOfPairs ? "mean_of_pairs" : "change_of_means";
}

[[noreturn]] void BadConfig(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, "run config: " + message);
}

void CheckKeys(const json& object, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) BadConfig(std::string(where) + " must be an object");
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      BadConfig("unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
void Read(const json& object, const char* key, T* out) {
  if (!object.contains(key) || object.at(key).is_null()) return;
  try {
    *out = object.at(key).get<T>();
  } catch (const json::exception&) {
    BadConfig(std::string("key '") + key + "' has the wrong type");
  }
}

void RequireFile(const std::filesystem::path& path, std::string_view what) {
  if (path.empty() || !std::filesystem::exists(path)) {
    throw Error(ErrorCode::kPreconditionFailed,
                std::string(what) + " not found: " +
                    (path.empty() ? std::string("(no path configured)") : path.string()),
                path.string());
  }
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> NonEmptyLines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  for (std::string& line : ReadLines(path)) {
    if (!NormalizeWhitespace(line).empty()) lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

StagePaths DefaultPaths(const RunConfig& config) {
  const std::filesystem::path dir(config.work_dir);
  StagePaths paths;
  paths.lexicon = config.lexicon_path.empty() ? dir / "lexicon.tsv"
                                              : std::filesystem::path(config.lexicon_path);
  paths.prompts = dir / "prompts.manifest";
  paths.manifest = dir / "deformed.manifest";
  paths.store = dir / "images.imgb";
  paths.scores = dir / "scores.tsv";
  paths.report_dir = dir / "report";
  return paths;
}

std::string RunConfig::ToJson() const {
  json corpora_json = json::array();
  for (const CorpusInput& c : corpora) {
    json item = {{"corpus", CorpusName(c.corpus)}, {"in", c.path}};
    item["n"] = c.n ? json(*c.n) : json(nullptr);
    corpora_json.push_back(item);
  }
  json kinds = json::array();
  for (Deformance d : deformances) kinds.push_back(DeformanceName(d));
  json doc = {
      {"seed", seed},
      {"work_dir", work_dir},
      {"ingest",
       {{"mrc", mrc_path},
        {"layout", mrc_layout_path},
        {"brysbaert", brysbaert_path},
        {"include_all", mrc_include_all}}},
      {"lexicon", lexicon_path},
      {"corpora", corpora_json},
      {"deformances", kinds},
      {"generation",
       {{"n_images", generation.n_images},
        {"temperature", generation.temperature},
        {"cond_scale", generation.cond_scale},
        {"model_tag", generation.model_tag},
        {"dim", generation.dim}}},
      {"backend", backend},
      {"max_in_flight", max_in_flight},
      {"oracle",
       {{"ground_truth_min", oracle.ground_truth_min},
        {"ground_truth_max", oracle.ground_truth_max},
        {"sigma_scale", oracle.sigma_scale},
        {"clip_floor", oracle.clip_floor},
        {"clip_ceiling", oracle.clip_ceiling},
        {"clip_jitter", oracle.clip_jitter}}},
      {"k_nn", k_nn},
      {"report",
       {{"decile_q", decile_q},
        {"svg", svg},
        {"ratings", ratings_path},
        {"ratings_from_lexicon", ratings_from_lexicon},
        {"aggregation", AggregationName(aggregation)}}},
  };
  return doc.dump();
}

std::string RunConfig::ConfigLine() const { return "config\t" + ToJson(); }

RunConfig RunConfig::FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    BadConfig(std::string("not valid JSON: ") + e.what());
  }
  CheckKeys(doc, "config",
            {"seed", "work_dir", "ingest", "lexicon", "corpora", "deformances",
             "generation", "backend", "max_in_flight", "oracle", "k_nn", "report"});
  RunConfig config;
  Read(doc, "seed", &config.seed);
  Read(doc, "work_dir", &config.work_dir);
  Read(doc, "lexicon", &config.lexicon_path);
  Read(doc, "backend", &config.backend);
  Read(doc, "max_in_flight", &config.max_in_flight);
  Read(doc, "k_nn", &config.k_nn);
  if (doc.contains("ingest")) {
    const json& ingest = doc.at("ingest");
    CheckKeys(ingest, "ingest", {"mrc", "layout", "brysbaert", "include_all"});
    Read(ingest, "mrc", &config.mrc_path);
    Read(ingest, "layout", &config.mrc_layout_path);
    Read(ingest, "brysbaert", &config.brysbaert_path);
    Read(ingest, "include_all", &config.mrc_include_all);
  }
  if (doc.contains("corpora")) {
    if (!doc.at("corpora").is_array()) BadConfig("corpora must be an array");
    for (const json& item : doc.at("corpora")) {
      CheckKeys(item, "corpora entry", {"corpus", "in", "n"});
      std::string name;
      Read(item, "corpus", &name);
      const auto corpus = CorpusFromName(name);
      if (!corpus) BadConfig("unknown corpus '" + name + "'");
      CorpusInput input;
      input.corpus = *corpus;
      Read(item, "in", &input.path);
      if (item.contains("n") && !item.at("n").is_null()) {
        size_t n = 0;
        Read(item, "n", &n);
        input.n = n;
      }
      config.corpora.push_back(std::move(input));
    }
  }
  if (doc.contains("deformances")) {
    std::vector<std::string> names;
    Read(doc, "deformances", &names);
    config.deformances.clear();
    for (const std::string& name : names) {
      const auto kind = DeformanceFromName(name);
      if (!kind || *kind == Deformance::kOriginal) {
        BadConfig("unknown deformance '" + name + "'");
      }
      config.deformances.push_back(*kind);
    }
  }
  if (doc.contains("generation")) {
    const json& g = doc.at("generation");
    CheckKeys(g, "generation",
              {"n_images", "temperature", "cond_scale", "model_tag", "dim"});
    Read(g, "n_images", &config.generation.n_images);
    Read(g, "temperature", &config.generation.temperature);
    Read(g, "cond_scale", &config.generation.cond_scale);
    Read(g, "model_tag", &config.generation.model_tag);
    Read(g, "dim", &config.generation.dim);
  }
  if (doc.contains("oracle")) {
    const json& o = doc.at("oracle");
    CheckKeys(o, "oracle",
              {"ground_truth_min", "ground_truth_max", "sigma_scale", "clip_floor",
               "clip_ceiling", "clip_jitter"});
    Read(o, "ground_truth_min", &config.oracle.ground_truth_min);
    Read(o, "ground_truth_max", &config.oracle.ground_truth_max);
    Read(o, "sigma_scale", &config.oracle.sigma_scale);
    Read(o, "clip_floor", &config.oracle.clip_floor);
    Read(o, "clip_ceiling", &config.oracle.clip_ceiling);
    Read(o, "clip_jitter", &config.oracle.clip_jitter);
  }
  if (doc.contains("report")) {
    const json& r = doc.at("report");
    CheckKeys(r, "report",
              {"decile_q", "svg", "ratings", "ratings_from_lexicon", "aggregation"});
    Read(r, "decile_q", &config.decile_q);
    Read(r, "svg", &config.svg);
    Read(r, "ratings", &config.ratings_path);
    Read(r, "ratings_from_lexicon", &config.ratings_from_lexicon);
    std::string aggregation = std::string(AggregationName(config.aggregation));
    Read(r, "aggregation", &aggregation);
    if (aggregation == "mean_of_pairs") {
      config.aggregation = Aggregation::kMeanOfPairs;
    } else if (aggregation == "change_of_means") {
      config.aggregation = Aggregation::kChangeOfMeans;
    } else {
      BadConfig("unknown aggregation '" + aggregation + "'");
    }
  }
  config.generation.Validate();
  if (config.k_nn == 0) BadConfig("k_nn must be at least 1");
  if (config.max_in_flight == 0) BadConfig("max_in_flight must be at least 1");
  if (!(config.decile_q > 0.0 && config.decile_q <= 0.5)) {
    BadConfig("decile_q must be in (0, 0.5]");
  }
  return config;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  return FromJson(ReadFile(path));
}

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kIngest: return "ingest";
    case Stage::kPrepare: return "prepare";
    case Stage::kDeform: return "deform";
    case Stage::kGenerate: return "generate";
    case Stage::kScore: return "score";
    case Stage::kReport: return "report";
  }
  return "unknown";
}

std::optional<Stage> StageFromName(std::string_view name) {
  for (Stage s : kAllStages) {
    if (StageName(s) == name) return s;
  }
  return std::nullopt;
}

FixedWidthLayout DefaultMrcLayout() {
  return FixedWidthLayout::FromJson(kDefaultLayoutJson);
}

Lexicon IngestLexicon(const RunConfig& config, std::vector<std::string>* notes) {
  std::vector<std::string> discarded;
  if (notes == nullptr) notes = &discarded;
  if (config.mrc_path.empty() && config.brysbaert_path.empty()) {
    throw Error(ErrorCode::kPreconditionFailed,
                "ingest needs an MRC or a Brysbaert file");
  }
  std::vector<LexiconEntry> entries;
  std::vector<SourceRecord> sources;
  const std::string now = UtcNow();
  const auto absorb = [&](ParseResult result, const std::string& name) {
    notes->push_back(name + ": " + std::to_string(result.entries.size()) +
                     " records, " + std::to_string(result.issues.size()) +
                     " malformed, " + std::to_string(result.skipped_multiword) +
                     " multi-word, " + std::to_string(result.skipped_unrated) +
                     " unrated skipped");
    for (const ParseIssue& issue : result.issues) {
      notes->push_back(name + ":" + std::to_string(issue.line) + ": " + issue.reason);
    }
    sources.push_back({name, result.entries.size(), now});
    entries.insert(entries.end(), std::make_move_iterator(result.entries.begin()),
                   std::make_move_iterator(result.entries.end()));
  };
  if (!config.mrc_path.empty()) {
    RequireFile(config.mrc_path, "MRC dictionary");
    const FixedWidthLayout layout = config.mrc_layout_path.empty()
                                        ? DefaultMrcLayout()
                                        : FixedWidthLayout::Load(config.mrc_layout_path);
    absorb(ParseMrc(ReadFile(config.mrc_path), layout, config.mrc_include_all), "mrc");
  }
  if (!config.brysbaert_path.empty()) {
    RequireFile(config.brysbaert_path, "Brysbaert table");
    absorb(ParseBrysbaert(ReadFile(config.brysbaert_path)), "brysbaert");
  }
  Lexicon lexicon = Merge(entries, std::move(sources));
  notes->push_back("lexicon: " + std::to_string(lexicon.size()) + " words, " +
                   std::to_string(lexicon.conflicts().size()) + " conflicts");
  return lexicon;
}

std::vector<Prompt> PreparePrompts(const CorpusInput& input, uint64_t seed,
                                   const Lexicon* lexicon,
                                   std::vector<std::string>* notes) {
  std::vector<std::string> discarded;
  if (notes == nullptr) notes = &discarded;
  const std::string name(CorpusName(input.corpus));
  const uint64_t corpus_seed = DeriveSeed(seed, "prepare/" + name);
  std::vector<Prompt> prompts;
  switch (input.corpus) {
    case Corpus::kPoems: {
      RequireFile(input.path, "poems corpus");
      const auto poems = SplitPoems(ReadFile(input.path));
      for (size_t i = 0; i < poems.size(); ++i) {
        auto pairs = PairPoemLines(poems[i], i + 1);
        prompts.insert(prompts.end(), pairs.begin(), pairs.end());
      }
      notes->push_back(name + ": " + std::to_string(poems.size()) + " poems, " +
                       std::to_string(prompts.size()) + " line pairs");
      if (input.n) prompts = SamplePrompts(std::move(prompts), *input.n, corpus_seed);
      break;
    }
    case Corpus::kCaptions: {
      RequireFile(input.path, "captions corpus");
      const std::vector<std::string> lines = NonEmptyLines(input.path);
      prompts = DeduplicateByText(FilterCaptions(lines));
      notes->push_back(name + ": " + std::to_string(lines.size()) + " captions, " +
                       std::to_string(prompts.size()) +
                       " kept after filtering and deduplication");
      prompts = SamplePrompts(std::move(prompts), input.n.value_or(kDefaultSampleSize),
                              corpus_seed);
      break;
    }
    case Corpus::kNews: {
      RequireFile(input.path, "news corpus");
      const std::vector<std::string> articles = NonEmptyLines(input.path);
      SampleResult sample = SampleNewsSentences(
          articles, input.n.value_or(kDefaultSampleSize), corpus_seed);
      notes->push_back(name + ": " + std::to_string(articles.size()) + " articles, " +
                       std::to_string(sample.eligible) + " eligible sentences" +
                       (sample.shortfall ? " (shortfall)" : ""));
      prompts = std::move(sample.prompts);
      break;
    }
    case Corpus::kMrcWords: {
      Lexicon loaded;
      if (!input.path.empty()) {
        RequireFile(input.path, "word lexicon");
        loaded = LoadLexicon(input.path);
        lexicon = &loaded;
      }
      if (lexicon == nullptr) {
        throw Error(ErrorCode::kPreconditionFailed, "mrc_words needs a lexicon");
      }
      prompts = WordsAsPrompts(*lexicon);
      if (input.n) prompts = SamplePrompts(std::move(prompts), *input.n, corpus_seed);
      break;
    }
  }
  notes->push_back(name + ": " + std::to_string(prompts.size()) + " prompts");
  return prompts;
}

namespace {

std::vector<std::string> Headers(const RunConfig& config,
                                 std::initializer_list<std::string> extra = {}) {
  std::vector<std::string> lines{config.ConfigLine()};
  lines.insert(lines.end(), extra.begin(), extra.end());
  return lines;
}

StageResult Ingest(const RunConfig& config, const StagePaths& paths) {
  StageResult result{Stage::kIngest, {}};
  const Lexicon lexicon = IngestLexicon(config, &result.notes);
  SaveLexicon(lexicon, paths.lexicon, config.ToJson());
  return result;
}

StageResult Prepare(const RunConfig& config, const StagePaths& paths) {
  StageResult result{Stage::kPrepare, {}};
  if (config.corpora.empty()) {
    throw Error(ErrorCode::kPreconditionFailed, "no corpora configured");
  }
  std::optional<Lexicon> lexicon;
  std::vector<Prompt> all;
  std::set<std::string> ids;
  for (const CorpusInput& input : config.corpora) {
    if (input.corpus == Corpus::kMrcWords && input.path.empty() && !lexicon) {
      RequireFile(paths.lexicon, "lexicon");
      lexicon = LoadLexicon(paths.lexicon);
    }
    for (Prompt& p : PreparePrompts(input, config.seed, lexicon ? &*lexicon : nullptr,
                                    &result.notes)) {
      if (!ids.insert(p.id).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "prompt id '" + p.id + "' occurs in two corpus inputs");
      }
      all.push_back(std::move(p));
    }
  }
  SaveManifest(all, paths.prompts,
               Headers(config, {"sampling\tdeduplicate then sample"}));
  return result;
}

StageResult Deform(const RunConfig& config, const StagePaths& paths) {
  StageResult result{Stage::kDeform, {}};
  RequireFile(paths.prompts, "prompt manifest");
  RequireFile(paths.lexicon, "lexicon");
  const std::vector<Prompt> prompts = LoadManifest(paths.prompts);
  const Lexicon lexicon = LoadLexicon(paths.lexicon);
  std::vector<Prompt> texts, words;
  for (const Prompt& p : prompts) {
    if (p.deformance != Deformance::kOriginal) {
      throw Error(ErrorCode::kPreconditionFailed,
                  "prompt manifest holds a deformed prompt '" + p.id + "'",
                  paths.prompts.string());
    }
    (p.corpus == Corpus::kMrcWords ? words : texts).push_back(p);
  }
  DeformStats stats;
  std::vector<Prompt> out =
      DeformAll(texts, config.deformances, lexicon, config.seed, &stats);
  // Isolated words are scored but never deformed.
  out.insert(out.end(), words.begin(), words.end());
  result.notes.push_back(std::to_string(stats.produced) + " deformed prompts, " +
                         std::to_string(stats.empty_outputs) + " empty, " +
                         std::to_string(stats.replace.replaced) + " nouns replaced, " +
                         std::to_string(stats.replace.no_alternative) +
                         " without alternative");
  SaveManifest(out, paths.manifest, Headers(config));
  return result;
}

StageResult Generate(const RunConfig& config, const StagePaths& paths) {
  StageResult result{Stage::kGenerate, {}};
  RequireFile(paths.manifest, "deformed manifest");
  const std::vector<Prompt> prompts = LoadManifest(paths.manifest);
  const std::filesystem::path store_path = paths.store;
  ImageStore store(config.generation.dim);
  if (std::filesystem::exists(store_path)) {
    store = LoadStore(store_path);
    if (store.dim() != config.generation.dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "store dimension " + std::to_string(store.dim()) +
                      " differs from configured " +
                      std::to_string(config.generation.dim),
                  store_path.string());
    }
  }
  OracleParams params = config.oracle;
  params.seed = config.seed;
  const SyntheticOracle oracle(params);
  const std::unique_ptr<Backend> backend =
      MakeBackend(config.backend, oracle, config.generation.dim);

  RequestOptions options;
  options.max_in_flight = config.max_in_flight;
  auto last_save = std::chrono::steady_clock::now();
  const std::string config_json = config.ToJson();
  options.checkpoint = [&](const ImageStore& current) {
    const auto now = std::chrono::steady_clock::now();
    if (now - last_save < std::chrono::seconds(30)) return;
    SaveStore(current, store_path, config_json);
    last_save = now;
  };
  GenerationReport report;
  try {
    report = RequestImages(prompts, config.generation, *backend, store, options);
  } catch (const Error&) {
    SaveStore(store, store_path, config_json);
    throw;
  }
  SaveStore(store, store_path, config_json);
  AtomicWriteFile(store_path.string() + ".failures", SerializeFailures(report.failures));
  // Empty prompts are never sent, so they do not count against the cache.
  const size_t cacheable = report.requested - report.skipped_empty;
  const double hit_rate =
      cacheable == 0 ? 100.0
                     : 100.0 * static_cast<double>(report.cache_hits) / cacheable;
  char rate[32];
  std::snprintf(rate, sizeof(rate), "%.1f", hit_rate);
  result.notes.push_back(
      std::to_string(report.requested) + " prompts, " +
      std::to_string(report.cache_hits) + " cache hits (" + rate + "%), " + std::to_string(report.generated) + " generated, " +
      std::to_string(report.skipped_empty) + " empty, " +
      std::to_string(report.failures.size()) + " failed, " +
      std::to_string(report.backend_calls) + " backend calls");
  return result;
}

StageResult Score(const RunConfig& config, const StagePaths& paths) {
  StageResult result{Stage::kScore, {}};
  RequireFile(paths.manifest, "deformed manifest");
  RequireFile(paths.store, "image store");
  RequireFile(paths.lexicon, "lexicon");
  const std::vector<Prompt> prompts = LoadManifest(paths.manifest);
  const ImageStore store = LoadStore(paths.store);
  const Lexicon lexicon = LoadLexicon(paths.lexicon);
  const ScoreTable table = ScoreManifest(prompts, store, lexicon, {config.k_nn});
  AtomicWriteFile(
      paths.scores,
      SerializeScores(table.rows,
                      Headers(config, {"knn\t" + std::to_string(config.k_nn),
                                       "pooling\tcorpus,deformance"})));
  result.notes.push_back(std::to_string(table.coverage.prompts) + " prompts, " +
                         std::to_string(table.coverage.with_images) + " with images, " +
                         std::to_string(table.coverage.missing.size()) +
                         " missing from store, " +
                         std::to_string(table.coverage.zero_norm_excluded) +
                         " zero-norm embeddings excluded");
  return result;
}

StageResult Report(const RunConfig& config, const StagePaths& paths) {
  StageResult result{Stage::kReport, {}};
  std::vector<std::filesystem::path> inputs = paths.report_inputs;
  if (inputs.empty()) inputs.push_back(paths.scores);
  std::vector<PromptScores> scores;
  for (const auto& input : inputs) {
    RequireFile(input, "scores");
    for (PromptScores& row : LoadScores(input)) scores.push_back(std::move(row));
  }
  std::optional<Lexicon> lexicon;
  if (std::filesystem::exists(paths.lexicon)) {
    lexicon = LoadLexicon(paths.lexicon);
  }
  std::optional<Ratings> ratings;
  if (!config.ratings_path.empty()) {
    RequireFile(config.ratings_path, "ratings file");
    ratings = LoadRatings(config.ratings_path);
  } else if (config.ratings_from_lexicon) {
    if (!lexicon) RequireFile(paths.lexicon, "lexicon");
    ratings = RatingsFromLexicon(*lexicon);
  }
  ReportOptions options;
  options.decile_q = config.decile_q;
  options.svg = config.svg;
  options.aggregation = config.aggregation;
  options.header_lines = {config.ConfigLine(), "knn\t" + std::to_string(config.k_nn)};
  const auto written = EmitReport(scores, ratings ? &*ratings : nullptr,
                                  lexicon ? &*lexicon : nullptr, paths.report_dir,
                                  options);
  result.notes.push_back(std::to_string(written.size()) + " report files in " +
                         paths.report_dir.string());
  return result;
}

}  // namespace

StageResult RunStage(const RunConfig& config, Stage stage,
                     const StagePaths& paths) {
  switch (stage) {
    case Stage::kIngest: return Ingest(config, paths);
    case Stage::kPrepare: return Prepare(config, paths);
    case Stage::kDeform: return Deform(config, paths);
    case Stage::kGenerate: return Generate(config, paths);
    case Stage::kScore: return Score(config, paths);
    case Stage::kReport: return Report(config, paths);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown stage");
}

std::string ErrorRecord(std::string_view stage, const Error& error) {
  const json record = {{"stage", stage},
                       {"code", ErrorCodeName(error.code())},
                       {"message", error.what()},
                       {"location", error.location()}};
  return record.dump();
}

int RunPipeline(const RunConfig& config, const std::vector<Stage>& stages,
                std::ostream& log, std::ostream& errors) {
  const StagePaths paths = DefaultPaths(config);
  std::vector<Stage> ordered = stages;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  for (Stage stage : ordered) {
    try {
      const StageResult result = RunStage(config, stage, paths);
      for (const std::string& note : result.notes) {
        log << "[" << StageName(stage) << "] " << note << '\n';
      }
    } catch (const Error& e) {
      errors << ErrorRecord(StageName(stage), e) << '\n';
      return 1;
    } catch (const std::exception& e) {
      errors << ErrorRecord(StageName(stage), Error(ErrorCode::kIoError, e.what()))
             << '\n';
      return 1;
    }
  }
  return 0;
}

}  // namespace imageability
