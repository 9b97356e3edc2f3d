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

#ifndef IMAGEABILITY_REPORT_H_
#define IMAGEABILITY_REPORT_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imageability/analysis.h"
#include "imageability/metrics.h"

namespace imageability {

// A CSV table. Comment lines ("# ...") precede the header row.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const CsvTable&) const = default;
};

std::string WriteCsv(const CsvTable& table);
CsvTable ReadCsv(std::string_view content, std::string_view location = {});

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::string series;
};

struct ScatterPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterPoint> points;
};

// Standalone SVG document with one <circle> per point.
std::string RenderSvgScatter(const ScatterPlot& plot);

std::string XmlEscape(std::string_view text);

CsvTable CorrelationCsv(const CorrelationReport& report);
CsvTable PercentChangeCsv(const PercentChangeReport& report);
CsvTable DecileCsv(std::span<const std::pair<Corpus, DecileReport>> reports);
CsvTable CorpusAverageCsv(std::span<const CorpusAverage> rows);

struct ReportOptions {
  double decile_q = 0.10;
  bool svg = false;
  Aggregation aggregation = Aggregation::kMeanOfPairs;
  std::vector<std::string> header_lines;  // copied into every CSV as comments
};

// Runs the analyses over `scores` and writes percent_change.csv,
// corpus_averages.csv, deciles.csv and, when ratings are given,
// correlations.csv (plus SVG scatter plots on request) into `out_dir`.
// Returns the written paths in a fixed order.
std::vector<std::filesystem::path> EmitReport(
    std::span<const PromptScores> scores, const Ratings* ratings,
    const Lexicon* lexicon, const std::filesystem::path& out_dir,
    const ReportOptions& options);

}  // namespace imageability

#endif  // IMAGEABILITY_REPORT_H_
