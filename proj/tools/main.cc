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

// Command-line entry point: one subcommand per pipeline stage plus "run".

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "imageability/error.h"
#include "imageability/pipeline.h"

namespace {

using imageability::Corpus;
using imageability::CorpusInput;
using imageability::Deformance;
using imageability::Error;
using imageability::ErrorCode;
using imageability::RunConfig;
using imageability::Stage;
using imageability::StagePaths;

// Flags that override fields of the loaded run config.
struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<std::string> work_dir;
  std::optional<std::string> backend;
  std::optional<int> n_images;
  std::optional<double> temperature;
  std::optional<int> cond_scale;
  std::optional<uint32_t> dim;
  std::optional<size_t> max_in_flight;
  std::optional<size_t> k_nn;
  std::optional<double> decile_q;
  bool svg = false;
  bool change_of_means = false;
  std::optional<std::string> ratings;
  bool ratings_from_lexicon = false;

  void Apply(RunConfig* config) const {
    if (seed) config->seed = *seed;
    if (work_dir) config->work_dir = *work_dir;
    if (backend) config->backend = *backend;
    if (n_images) config->generation.n_images = *n_images;
    if (temperature) config->generation.temperature = *temperature;
    if (cond_scale) config->generation.cond_scale = *cond_scale;
    if (dim) config->generation.dim = *dim;
    if (max_in_flight) config->max_in_flight = *max_in_flight;
    if (k_nn) config->k_nn = *k_nn;
    if (decile_q) config->decile_q = *decile_q;
    if (svg) config->svg = true;
    if (change_of_means) config->aggregation = imageability::Aggregation::kChangeOfMeans;
    if (ratings) config->ratings_path = *ratings;
    if (ratings_from_lexicon) config->ratings_from_lexicon = true;
  }
};

int Fail(std::string_view stage, const Error& error) {
  std::cerr << imageability::ErrorRecord(stage, error) << '\n';
  return 1;
}

int RunOne(const RunConfig& config, Stage stage, const StagePaths& paths) {
  try {
    config.generation.Validate();
    const auto result = imageability::RunStage(config, stage, paths);
    for (const std::string& note : result.notes) {
      std::cerr << "[" << imageability::StageName(stage) << "] " << note << '\n';
    }
    return 0;
  } catch (const Error& e) {
    return Fail(imageability::StageName(stage), e);
  } catch (const std::exception& e) {
    return Fail(imageability::StageName(stage), Error(ErrorCode::kIoError, e.what()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imageability measurement pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "Declarative run config (JSON)")
      ->check(CLI::ExistingFile);
  Overrides overrides;

  // ingest-lexicon
  auto* ingest = app.add_subcommand("ingest-lexicon", "Build the canonical lexicon");
  std::string mrc, layout, brysbaert, lexicon_out;
  bool include_all = false;
  ingest->add_option("--mrc", mrc, "MRC dictionary file");
  ingest->add_option("--layout", layout, "Fixed-width layout (JSON)");
  ingest->add_option("--brysbaert", brysbaert, "Brysbaert concreteness table");
  ingest->add_flag("--include-all", include_all, "Keep MRC words without imageability");
  ingest->add_option("--out", lexicon_out, "Output lexicon")->required();

  // prepare-prompts
  auto* prepare = app.add_subcommand("prepare-prompts", "Build original prompts");
  std::string corpus_name, corpus_in, prompts_out, prepare_lexicon;
  std::optional<size_t> sample_n;
  prepare->add_option("--corpus", corpus_name, "poems|captions|news|mrc-words")
      ->required();
  prepare->add_option("--in", corpus_in, "Corpus input file");
  prepare->add_option("--n", sample_n, "Sample size");
  prepare->add_option("--seed", overrides.seed, "Global seed");
  prepare->add_option("--lexicon", prepare_lexicon, "Lexicon (for mrc-words)");
  prepare->add_option("--out", prompts_out, "Output manifest")->required();

  // deform
  auto* deform = app.add_subcommand("deform", "Apply deformances");
  std::string deform_in, kind_name, deform_lexicon, deform_out;
  deform->add_option("--manifest", deform_in, "Original prompts")->required();
  deform->add_option("--kind", kind_name,
                     "backward|permuted|just-nouns|replaced-nouns|all")
      ->required();
  deform->add_option("--lexicon", deform_lexicon, "Lexicon")->required();
  deform->add_option("--seed", overrides.seed, "Global seed");
  deform->add_option("--out", deform_out, "Output manifest")->required();

  // generate
  auto* generate = app.add_subcommand("generate", "Request images for prompts");
  std::string generate_in, store_path;
  generate->add_option("--manifest", generate_in, "Prompt manifest")->required();
  generate->add_option("--backend", overrides.backend,
                       "mock | stdio:<cmd> | tcp:<host:port>");
  generate->add_option("--n-images", overrides.n_images, "Images per prompt (1-16)");
  generate->add_option("--temperature", overrides.temperature, "Sampling temperature");
  generate->add_option("--cond-scale", overrides.cond_scale, "Condition scale (1-10)");
  generate->add_option("--dim", overrides.dim, "Embedding dimension");
  generate->add_option("--max-in-flight", overrides.max_in_flight,
                       "Requests per backend round trip");
  generate->add_option("--seed", overrides.seed, "Global seed (mock oracle)");
  generate->add_option("--store", store_path, "Image store")->required();

  // score
  auto* score = app.add_subcommand("score", "Compute per-prompt measures");
  std::string score_in, score_store, score_lexicon, scores_out;
  score->add_option("--manifest", score_in, "Prompt manifest")->required();
  score->add_option("--store", score_store, "Image store")->required();
  score->add_option("--lexicon", score_lexicon, "Lexicon")->required();
  score->add_option("--knn", overrides.k_nn, "Neighbourhood size");
  score->add_option("--out", scores_out, "Output scores")->required();

  // report
  auto* report = app.add_subcommand("report", "Write analysis tables and plots");
  std::vector<std::string> report_in;
  std::string report_dir, report_lexicon;
  report->add_option("--scores", report_in, "Score files")->required();
  report->add_option("--ratings", overrides.ratings, "Ratings file (#ratings v1)");
  report->add_option("--lexicon", report_lexicon, "Lexicon (Brown frequency control)");
  report->add_flag("--ratings-from-lexicon", overrides.ratings_from_lexicon,
                   "Use MRC imageability of the lexicon as ratings");
  report->add_option("--deciles", overrides.decile_q, "Top/bottom fraction");
  report->add_flag("--svg", overrides.svg, "Also write SVG scatter plots");
  report->add_flag("--change-of-means", overrides.change_of_means,
                   "Percent change of means instead of mean of pair changes");
  report->add_option("--out-dir", report_dir, "Output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "Run pipeline stages from the config");
  std::vector<std::string> stage_names;
  run->add_option("--stages", stage_names,
                  "Subset of ingest,prepare,deform,generate,score,report")
      ->delimiter(',');
  run->add_option("--seed", overrides.seed, "Global seed");
  run->add_option("--work-dir", overrides.work_dir, "Working directory");
  run->add_option("--backend", overrides.backend, "Generation backend");
  run->add_option("--knn", overrides.k_nn, "Neighbourhood size");
  run->add_flag("--svg", overrides.svg, "Also write SVG scatter plots");

  CLI11_PARSE(app, argc, argv);

  RunConfig config;
  try {
    if (!config_path.empty()) config = RunConfig::Load(config_path);
  } catch (const Error& e) {
    return Fail("config", e);
  }
  overrides.Apply(&config);
  StagePaths paths = imageability::DefaultPaths(config);

  if (ingest->parsed()) {
    if (!mrc.empty()) config.mrc_path = mrc;
    if (!layout.empty()) config.mrc_layout_path = layout;
    if (!brysbaert.empty()) config.brysbaert_path = brysbaert;
    if (include_all) config.mrc_include_all = true;
    paths.lexicon = lexicon_out;
    return RunOne(config, Stage::kIngest, paths);
  }
  if (prepare->parsed()) {
    const auto corpus = imageability::CorpusFromName(corpus_name);
    if (!corpus) {
      return Fail("prepare", Error(ErrorCode::kInvalidArgument,
                                   "unknown corpus '" + corpus_name + "'"));
    }
    CorpusInput input{*corpus, corpus_in, sample_n};
    if (*corpus == Corpus::kMrcWords && corpus_in.empty()) input.path = prepare_lexicon;
    config.corpora = {input};
    paths.prompts = prompts_out;
    return RunOne(config, Stage::kPrepare, paths);
  }
  if (deform->parsed()) {
    if (kind_name != "all") {
      const auto kind = imageability::DeformanceFromName(kind_name);
      if (!kind || *kind == Deformance::kOriginal) {
        return Fail("deform", Error(ErrorCode::kInvalidArgument,
                                    "unknown deformance '" + kind_name + "'"));
      }
      config.deformances = {*kind};
    }
    paths.prompts = deform_in;
    paths.lexicon = deform_lexicon;
    paths.manifest = deform_out;
    return RunOne(config, Stage::kDeform, paths);
  }
  if (generate->parsed()) {
    paths.manifest = generate_in;
    paths.store = store_path;
    return RunOne(config, Stage::kGenerate, paths);
  }
  if (score->parsed()) {
    paths.manifest = score_in;
    paths.store = score_store;
    paths.lexicon = score_lexicon;
    paths.scores = scores_out;
    return RunOne(config, Stage::kScore, paths);
  }
  if (report->parsed()) {
    paths.report_inputs.assign(report_in.begin(), report_in.end());
    paths.lexicon = report_lexicon;
    paths.report_dir = report_dir;
    return RunOne(config, Stage::kReport, paths);
  }

  std::vector<Stage> stages;
  if (stage_names.empty()) {
    for (Stage s : imageability::kAllStages) {
      if (s == Stage::kIngest && config.mrc_path.empty() &&
          config.brysbaert_path.empty()) {
        continue;
      }
      stages.push_back(s);
    }
  }
  for (const std::string& name : stage_names) {
    const auto stage = imageability::StageFromName(name);
    if (!stage) {
      return Fail("run", Error(ErrorCode::kInvalidArgument,
                               "unknown stage '" + name + "'"));
    }
    stages.push_back(*stage);
  }
  return imageability::RunPipeline(config, stages, std::cerr, std::cerr);
}
