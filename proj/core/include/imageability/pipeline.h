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

#ifndef IMAGEABILITY_PIPELINE_H_
#define IMAGEABILITY_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imageability/analysis.h"
#include "imageability/corpus.h"
#include "imageability/error.h"
#include "imageability/generation.h"
#include "imageability/metrics.h"

namespace imageability {

struct CorpusInput {
  Corpus corpus = Corpus::kPoems;
  std::string path;  // for mrc_words: a canonical lexicon (empty: the run's)
  std::optional<size_t> n;  // default: 5000 for captions and news, else all
};

inline constexpr size_t kDefaultSampleSize = 5000;

// Declarative description of one run. Relative paths resolve against the
// current directory. Every stage output carries ConfigLine() in its header.
struct RunConfig {
  uint64_t seed = 0;
  std::string work_dir = "run";

  std::string mrc_path;
  std::string mrc_layout_path;  // empty: built-in default layout
  std::string brysbaert_path;
  bool mrc_include_all = false;
  std::string lexicon_path;  // empty: <work_dir>/lexicon.tsv

  std::vector<CorpusInput> corpora;
  std::vector<Deformance> deformances = {Deformance::kBackward,
                                         Deformance::kPermuted,
                                         Deformance::kJustNouns,
                                         Deformance::kReplacedNouns};

  GenerationConfig generation;
  std::string backend = "mock";
  size_t max_in_flight = 8;
  OracleParams oracle;  // oracle.seed is taken from `seed`

  size_t k_nn = kDefaultKnn;
  double decile_q = 0.10;
  bool svg = false;
  std::string ratings_path;
  bool ratings_from_lexicon = false;
  Aggregation aggregation = Aggregation::kMeanOfPairs;

  // Compact JSON with sorted keys.
  std::string ToJson() const;
  // "config\t<json>", the header line shared by all outputs.
  std::string ConfigLine() const;

  // Unknown keys are rejected (kInvalidArgument).
  static RunConfig FromJson(std::string_view json);
  static RunConfig Load(const std::filesystem::path& path);
};

enum class Stage { kIngest, kPrepare, kDeform, kGenerate, kScore, kReport };
inline constexpr Stage kAllStages[] = {Stage::kIngest,   Stage::kPrepare,
                                       Stage::kDeform,   Stage::kGenerate,
                                       Stage::kScore,    Stage::kReport};
std::string_view StageName(Stage stage);
std::optional<Stage> StageFromName(std::string_view name);

FixedWidthLayout DefaultMrcLayout();

// Builds the canonical lexicon from the configured MRC and Brysbaert files.
// `notes` may be null here and in PreparePrompts.
Lexicon IngestLexicon(const RunConfig& config, std::vector<std::string>* notes);

// Reads one corpus input and returns its original prompts.
std::vector<Prompt> PreparePrompts(const CorpusInput& input, uint64_t seed,
                                   const Lexicon* lexicon,
                                   std::vector<std::string>* notes);

// Stage inputs and outputs. `prompts` holds originals (prepare -> deform),
// `manifest` the scored prompt set (deform -> generate -> score).
struct StagePaths {
  std::filesystem::path lexicon;
  std::filesystem::path prompts;
  std::filesystem::path manifest;
  std::filesystem::path store;
  std::filesystem::path scores;
  std::vector<std::filesystem::path> report_inputs;  // default: {scores}
  std::filesystem::path report_dir;
};

// Files under work_dir; the lexicon path may be set explicitly.
StagePaths DefaultPaths(const RunConfig& config);

struct StageResult {
  Stage stage;
  std::vector<std::string> notes;  // human-readable summary lines
};

// Runs one stage with its inputs and outputs at the configured paths.
// Throws Error(kPreconditionFailed) naming a missing input file.
StageResult RunStage(const RunConfig& config, Stage stage,
                     const StagePaths& paths);

// Runs `stages` in pipeline order on DefaultPaths(config). On failure writes
// a one-line JSON error record ({"stage", "code", "message", "location"}) to `errors` and returns
// a nonzero status; progress notes go to `log`.
int RunPipeline(const RunConfig& config, const std::vector<Stage>& stages,
                std::ostream& log, std::ostream& errors);

// One-line JSON error record.
std::string ErrorRecord(std::string_view stage, const Error& error);

}  // namespace imageability

#endif  // IMAGEABILITY_PIPELINE_H_
