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

#include "imageability/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "imageability/error.h"
#include "imageability/io.h"

namespace imageability {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string Fixed(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

std::string Count(size_t n) { return std::to_string(n); }

void Write(const std::filesystem::path& path, const std::string& content,
           std::vector<std::filesystem::path>* written) {
  AtomicWriteFile(path, content);
  written->push_back(path);
}

}  // namespace

std::string WriteCsv(const CsvTable& table) {
  std::string out;
  for (const std::string& comment : table.comments) {
    out += "# ";
    out += comment;
    out += '\n';
  }
  const auto write_row = [&out](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += CsvField(row[i]);
    }
    out += '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  return out;
}

CsvTable ReadCsv(std::string_view content, std::string_view location) {
  CsvTable table;
  size_t pos = 0;
  size_t line_no = 0;
  bool have_header = false;
  while (pos < content.size()) {
    ++line_no;
    if (!have_header && content[pos] == '#') {
      size_t end = content.find('\n', pos);
      if (end == std::string_view::npos) end = content.size();
      std::string_view line = content.substr(pos, end - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      line.remove_prefix(line.starts_with("# ") ? 2 : 1);
      table.comments.emplace_back(line);
      pos = end + 1;
      continue;
    }
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool done = false;
    while (!done) {
      if (pos >= content.size()) {
        if (quoted) {
          throw Error(ErrorCode::kMalformedRecord, "unterminated quoted field",
                      std::string(location) + ":" + std::to_string(line_no));
        }
        row.push_back(std::move(field));
        break;
      }
      const char c = content[pos++];
      if (quoted) {
        if (c == '"') {
          if (pos < content.size() && content[pos] == '"') {
            field += '"';
            ++pos;
          } else {
            quoted = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
      } else if (c == '\n') {
        row.push_back(std::move(field));
        done = true;
      } else if (c != '\r') {
        field += c;
      }
    }
    if (!have_header) {
      table.header = std::move(row);
      have_header = true;
    } else {
      if (row.size() != table.header.size()) {
        throw Error(ErrorCode::kMalformedRecord,
                    "expected " + Count(table.header.size()) + " fields, got " +
                        Count(row.size()),
                    std::string(location) + ":" + std::to_string(line_no));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string XmlEscape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string RenderSvgScatter(const ScatterPlot& plot) {
  double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
  if (!plot.points.empty()) {
    min_x = max_x = plot.points.front().x;
    min_y = max_y = plot.points.front().y;
    for (const ScatterPoint& p : plot.points) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  }
  if (max_x - min_x <= 0) { min_x -= 1; max_x += 1; }
  if (max_y - min_y <= 0) { min_y -= 1; max_y += 1; }
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  const auto sx = [&](double x) { return kMargin + (x - min_x) / (max_x - min_x) * plot_w; };
  const auto sy = [&](double y) {
    return kHeight - kMargin - (y - min_y) / (max_y - min_y) * plot_h;
  };

  std::map<std::string, size_t> series;
  for (const ScatterPoint& p : plot.points) series.emplace(p.series, series.size());

  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
      "viewBox=\"0 0 640 480\">\n"
      "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" +
         XmlEscape(plot.title) + "</text>\n";
  out += "<line x1=\"60\" y1=\"420\" x2=\"580\" y2=\"420\" stroke=\"black\"/>\n";
  out += "<line x1=\"60\" y1=\"60\" x2=\"60\" y2=\"420\" stroke=\"black\"/>\n";
  out += "<text x=\"320\" y=\"460\" text-anchor=\"middle\" font-size=\"12\">" +
         XmlEscape(plot.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-size=\"12\" "
         "transform=\"rotate(-90 16 240)\">" +
         XmlEscape(plot.y_label) + "</text>\n";
  out += "<text x=\"60\" y=\"436\" font-size=\"10\">" + XmlEscape(FormatDouble(min_x)) +
         "</text>\n";
  out += "<text x=\"580\" y=\"436\" text-anchor=\"end\" font-size=\"10\">" +
         XmlEscape(FormatDouble(max_x)) + "</text>\n";
  out += "<text x=\"56\" y=\"420\" text-anchor=\"end\" font-size=\"10\">" +
         XmlEscape(FormatDouble(min_y)) + "</text>\n";
  out += "<text x=\"56\" y=\"66\" text-anchor=\"end\" font-size=\"10\">" +
         XmlEscape(FormatDouble(max_y)) + "</text>\n";
  for (const ScatterPoint& p : plot.points) {
    const size_t color = series.at(p.series) % std::size(kPalette);
    out += "<circle cx=\"" + Fixed(sx(p.x)) + "\" cy=\"" + Fixed(sy(p.y)) +
           "\" r=\"2.5\" fill=\"" + kPalette[color] + "\" fill-opacity=\"0.7\"/>\n";
  }
  double legend_y = 60;
  for (const auto& [name, index] : series) {
    if (name.empty()) continue;
    out += "<text x=\"590\" y=\"" + Fixed(legend_y) + "\" font-size=\"10\" fill=\"" +
           kPalette[index % std::size(kPalette)] + "\">" + XmlEscape(name) +
           "</text>\n";
    legend_y += 14;
  }
  out += "</svg>\n";
  return out;
}

CsvTable CorrelationCsv(const CorrelationReport& report) {
  CsvTable table;
  table.header = {"measure", "r", "n", "dropped"};
  for (const CorrelationRow& row : report.rows) {
    table.rows.push_back({row.measure, FormatOptional(row.r), Count(row.n),
                          Count(row.dropped)});
  }
  return table;
}

CsvTable PercentChangeCsv(const PercentChangeReport& report) {
  CsvTable table;
  table.header = {"corpus",  "deformance",          "measure",
                  "mean_percent_change", "n_pairs", "n_skipped_zero_base",
                  "n_skipped_absent"};
  for (const PercentChangeRow& row : report.rows) {
    table.rows.push_back({std::string(CorpusName(row.corpus)),
                          std::string(DeformanceName(row.deformance)),
                          std::string(MeasureName(row.measure)),
                          FormatOptional(row.mean_percent_change), Count(row.n_pairs),
                          Count(row.n_skipped_zero_base),
                          Count(row.n_skipped_absent)});
  }
  return table;
}

CsvTable DecileCsv(std::span<const std::pair<Corpus, DecileReport>> reports) {
  CsvTable table;
  table.header = {"corpus",  "measure", "group",     "group_size", "deformance",
                  "mean_percent_change", "n_pairs", "n_skipped"};
  for (const auto& [corpus, report] : reports) {
    const auto add = [&](std::string_view group, size_t size,
                         const std::vector<DecileGroupRow>& rows) {
      for (const DecileGroupRow& row : rows) {
        table.rows.push_back({std::string(CorpusName(corpus)),
                              std::string(MeasureName(report.measure)),
                              std::string(group), Count(size),
                              std::string(DeformanceName(row.deformance)),
                              FormatOptional(row.mean_percent_change),
                              Count(row.n_pairs), Count(row.n_skipped)});
      }
    };
    add("bottom", report.bottom_ids.size(), report.bottom);
    add("top", report.top_ids.size(), report.top);
  }
  return table;
}

CsvTable CorpusAverageCsv(std::span<const CorpusAverage> rows) {
  CsvTable table;
  table.header = {"corpus", "imag_bow", "n_imag", "conc_bow", "n_conc"};
  for (const CorpusAverage& row : rows) {
    table.rows.push_back({std::string(CorpusName(row.corpus)),
                          FormatOptional(row.imag_bow), Count(row.n_imag),
                          FormatOptional(row.conc_bow), Count(row.n_conc)});
  }
  return table;
}

std::vector<std::filesystem::path> EmitReport(
    std::span<const PromptScores> scores, const Ratings* ratings,
    const Lexicon* lexicon, const std::filesystem::path& out_dir,
    const ReportOptions& options) {
  std::vector<std::filesystem::path> written;
  const std::vector<std::string>& comments = options.header_lines;

  const PercentChangeReport table = DeformanceTable(scores, options.aggregation);
  CsvTable change = PercentChangeCsv(table);
  change.comments = comments;
  change.comments.push_back(
      "aggregation=" + std::string(options.aggregation == Aggregation::kMeanOfPairs
                                       ? "mean_of_pairs"
                                       : "change_of_means") +
      " unmatched_rows=" + Count(table.unmatched_rows));
  Write(out_dir / "percent_change.csv", WriteCsv(change), &written);

  CsvTable averages = CorpusAverageCsv(CorpusAverages(scores));
  averages.comments = comments;
  Write(out_dir / "corpus_averages.csv", WriteCsv(averages), &written);

  std::map<Corpus, std::vector<PromptScores>> by_corpus;
  for (const PromptScores& s : scores) by_corpus[s.corpus].push_back(s);
  std::vector<std::pair<Corpus, DecileReport>> deciles;
  std::vector<std::string> decile_notes;
  for (const auto& [corpus, rows] : by_corpus) {
    for (Measure m : kAllMeasures) {
      try {
        deciles.emplace_back(corpus, DecileAnalysis(rows, m, options.decile_q));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kTooFewRows) throw;
        decile_notes.push_back("skipped " + std::string(CorpusName(corpus)) + "/" +
                               std::string(MeasureName(m)) + ": " + e.what());
      }
    }
  }
  CsvTable decile_csv = DecileCsv(deciles);
  decile_csv.comments = comments;
  decile_csv.comments.push_back("q=" + FormatDouble(options.decile_q));
  for (const std::string& note : decile_notes) decile_csv.comments.push_back(note);
  Write(out_dir / "deciles.csv", WriteCsv(decile_csv), &written);

  if (ratings != nullptr) {
    CsvTable corr = CorrelationCsv(CorrelateWithRatings(scores, *ratings, lexicon));
    corr.comments = comments;
    Write(out_dir / "correlations.csv", WriteCsv(corr), &written);
  }

  if (!options.svg) return written;

  if (ratings != nullptr) {
    for (Measure m : kAllMeasures) {
      ScatterPlot plot;
      plot.title = std::string(MeasureName(m)) + " vs rating";
      plot.x_label = std::string(MeasureName(m));
      plot.y_label = "rating";
      for (const PromptScores& s : scores) {
        const auto it = ratings->find(s.prompt_id);
        const auto v = MeasureValue(s, m);
        if (it == ratings->end() || !v) continue;
        plot.points.push_back({*v, it->second, std::string(CorpusName(s.corpus))});
      }
      Write(out_dir / ("scatter_" + std::string(MeasureName(m)) + "_vs_rating.svg"),
            RenderSvgScatter(plot), &written);
    }
  }
  for (const auto& [corpus, report] : deciles) {
    ScatterPlot plot;
    const std::string name =
        std::string(CorpusName(corpus)) + "_" + std::string(MeasureName(report.measure));
    plot.title = name + " percent change";
    plot.x_label = "original " + std::string(MeasureName(report.measure));
    plot.y_label = "percent change";
    for (const ChangePoint& p : report.points) {
      plot.points.push_back(
          {p.original, p.percent_change, std::string(DeformanceName(p.deformance))});
    }
    Write(out_dir / ("change_" + name + ".svg"), RenderSvgScatter(plot), &written);
  }
  return written;
}

}  // namespace imageability
