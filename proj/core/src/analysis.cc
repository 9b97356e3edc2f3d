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

#include "imageability/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "imageability/error.h"
#include "imageability/io.h"
#include "imageability/text.h"

namespace imageability {
namespace {

constexpr Deformance kDeformed[] = {Deformance::kBackward, Deformance::kPermuted,
                                    Deformance::kJustNouns,
                                    Deformance::kReplacedNouns};

double Mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

struct Pair {
  const PromptScores* original;
  const PromptScores* deformed;
};

// Matched (original, deformed) pairs in input order, plus the number of
// deformed rows whose original is missing.
std::vector<Pair> MatchPairs(std::span<const PromptScores> scores,
                             size_t* unmatched) {
  std::unordered_map<std::string_view, const PromptScores*> originals;
  for (const PromptScores& s : scores) {
    if (s.deformance == Deformance::kOriginal) originals.emplace(s.prompt_id, &s);
  }
  std::vector<Pair> pairs;
  size_t missing = 0;
  for (const PromptScores& s : scores) {
    if (s.deformance == Deformance::kOriginal) continue;
    const auto it = originals.find(s.origin_id);
    if (it == originals.end()) {
      ++missing;
      continue;
    }
    pairs.push_back({it->second, &s});
  }
  if (unmatched != nullptr) *unmatched = missing;
  return pairs;
}

}  // namespace

std::optional<double> Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "pearson inputs differ in length");
  }
  if (x.size() < 2) return std::nullopt;
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationRow PearsonPairwise(std::string_view measure,
                               std::span<const std::optional<double>> x,
                               std::span<const std::optional<double>> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "pearson inputs differ in length");
  }
  CorrelationRow row;
  row.measure = std::string(measure);
  std::vector<double> xs, ys;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i]) {
      xs.push_back(*x[i]);
      ys.push_back(*y[i]);
    } else {
      ++row.dropped;
    }
  }
  row.n = xs.size();
  row.r = Pearson(xs, ys);
  return row;
}

std::optional<double> PercentChange(double original, double deformed) {
  if (std::fabs(original) < kZeroBaseEpsilon) return std::nullopt;
  return 100.0 * (deformed - original) / original;
}

PercentChangeReport DeformanceTable(std::span<const PromptScores> scores,
                                    Aggregation aggregation) {
  PercentChangeReport report;
  report.aggregation = aggregation;
  const std::vector<Pair> pairs = MatchPairs(scores, &report.unmatched_rows);

  std::map<std::tuple<Corpus, Deformance>, std::vector<Pair>> groups;
  for (const Pair& p : pairs) {
    groups[{p.deformed->corpus, p.deformed->deformance}].push_back(p);
  }
  for (const auto& [key, members] : groups) {
    for (Measure m : kAllMeasures) {
      PercentChangeRow row;
      row.corpus = std::get<0>(key);
      row.deformance = std::get<1>(key);
      row.measure = m;
      std::vector<double> changes, before, after;
      for (const Pair& p : members) {
        const auto o = MeasureValue(*p.original, m);
        const auto d = MeasureValue(*p.deformed, m);
        if (!o || !d) {
          ++row.n_skipped_absent;
          continue;
        }
        if (aggregation == Aggregation::kChangeOfMeans) {
          before.push_back(*o);
          after.push_back(*d);
          continue;
        }
        const auto change = PercentChange(*o, *d);
        if (!change) {
          ++row.n_skipped_zero_base;
          continue;
        }
        changes.push_back(*change);
      }
      if (aggregation == Aggregation::kChangeOfMeans) {
        row.n_pairs = before.size();
        if (!before.empty()) {
          row.mean_percent_change = PercentChange(Mean(before), Mean(after));
          if (!row.mean_percent_change) {
            row.n_skipped_zero_base = row.n_pairs;
            row.n_pairs = 0;
          }
        }
      } else {
        row.n_pairs = changes.size();
        if (!changes.empty()) row.mean_percent_change = Mean(changes);
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

DecileReport DecileAnalysis(std::span<const PromptScores> scores, Measure measure,
                            double q) {
  if (!(q > 0.0 && q <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "decile fraction must be in (0, 0.5]");
  }
  DecileReport report;
  report.measure = measure;
  report.q = q;

  std::vector<std::pair<double, const PromptScores*>> originals;
  for (const PromptScores& s : scores) {
    if (s.deformance != Deformance::kOriginal) continue;
    if (const auto v = MeasureValue(s, measure)) originals.emplace_back(*v, &s);
  }
  report.n_originals = originals.size();
  if (originals.size() < kMinDecileRows) {
    throw Error(ErrorCode::kTooFewRows,
                "decile analysis of " + std::string(MeasureName(measure)) +
                    " needs at least " + std::to_string(kMinDecileRows) +
                    " originals, got " + std::to_string(originals.size()));
  }
  std::stable_sort(originals.begin(), originals.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const size_t n = originals.size();
  const size_t bottom_n =
      std::min(n, static_cast<size_t>(std::ceil(q * static_cast<double>(n) - 1e-9)));
  const size_t top_n = std::min(bottom_n, n - bottom_n);
  for (size_t i = 0; i < bottom_n; ++i) {
    report.bottom_ids.push_back(originals[i].second->prompt_id);
  }
  for (size_t i = n - top_n; i < n; ++i) {
    report.top_ids.push_back(originals[i].second->prompt_id);
  }

  const std::vector<Pair> pairs = MatchPairs(scores, nullptr);
  const auto group_rows = [&](const std::vector<std::string>& ids) {
    const std::set<std::string_view> members(ids.begin(), ids.end());
    std::vector<DecileGroupRow> rows;
    for (Deformance d : kDeformed) {
      DecileGroupRow row;
      row.deformance = d;
      std::vector<double> changes;
      for (const Pair& p : pairs) {
        if (p.deformed->deformance != d || !members.count(p.original->prompt_id)) {
          continue;
        }
        const auto o = MeasureValue(*p.original, measure);
        const auto v = MeasureValue(*p.deformed, measure);
        const auto change = (o && v) ? PercentChange(*o, *v) : std::nullopt;
        if (change) {
          changes.push_back(*change);
        } else {
          ++row.n_skipped;
        }
      }
      row.n_pairs = changes.size();
      if (!changes.empty()) row.mean_percent_change = Mean(changes);
      rows.push_back(row);
    }
    return rows;
  };
  report.bottom = group_rows(report.bottom_ids);
  report.top = group_rows(report.top_ids);

  for (const Pair& p : pairs) {
    const auto o = MeasureValue(*p.original, measure);
    const auto v = MeasureValue(*p.deformed, measure);
    if (!o || !v) continue;
    if (const auto change = PercentChange(*o, *v)) {
      report.points.push_back({p.deformed->deformance, *o, *change});
    }
  }
  return report;
}

std::vector<CorpusAverage> CorpusAverages(std::span<const PromptScores> scores) {
  std::map<Corpus, std::pair<std::vector<double>, std::vector<double>>> values;
  for (const PromptScores& s : scores) {
    if (s.deformance != Deformance::kOriginal) continue;
    auto& [imag, conc] = values[s.corpus];
    if (s.imag_bow) imag.push_back(*s.imag_bow);
    if (s.conc_bow) conc.push_back(*s.conc_bow);
  }
  std::vector<CorpusAverage> rows;
  for (const auto& [corpus, v] : values) {
    CorpusAverage row;
    row.corpus = corpus;
    row.n_imag = v.first.size();
    row.n_conc = v.second.size();
    if (!v.first.empty()) row.imag_bow = Mean(v.first);
    if (!v.second.empty()) row.conc_bow = Mean(v.second);
    rows.push_back(row);
  }
  return rows;
}

Ratings ParseRatings(std::string_view content, std::string_view location) {
  const std::vector<std::string> lines = SplitLines(content);
  const std::string where(location);
  if (lines.empty() || lines.front() != "#ratings v1") {
    throw Error(ErrorCode::kBadMagic, "missing '#ratings v1' header", where);
  }
  Ratings ratings;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    const std::string at = where + ":" + std::to_string(i + 1);
    const auto fields = SplitChar(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::kMalformedRecord, "expected id and rating", at);
    }
    const auto value = ParseDouble(fields[1]);
    if (!value) {
      throw Error(ErrorCode::kMalformedRecord,
                  "bad rating '" + std::string(fields[1]) + "'", at);
    }
    if (!ratings.emplace(std::string(fields[0]), *value).second) {
      throw Error(ErrorCode::kMalformedRecord,
                  "duplicate id '" + std::string(fields[0]) + "'", at);
    }
  }
  return ratings;
}

Ratings LoadRatings(const std::filesystem::path& path) {
  return ParseRatings(ReadFile(path), path.string());
}

std::string SerializeRatings(const Ratings& ratings) {
  std::string out = "#ratings v1\n";
  for (const auto& [id, value] : ratings) {
    out += id;
    out += '\t';
    out += FormatDouble(value);
    out += '\n';
  }
  return out;
}

Ratings RatingsFromLexicon(const Lexicon& lexicon) {
  Ratings ratings;
  for (const auto& [word, entry] : lexicon.entries()) {
    if (entry.imageability) ratings.emplace(word, *entry.imageability);
  }
  return ratings;
}

CorrelationReport CorrelateWithRatings(std::span<const PromptScores> scores,
                                       const Ratings& ratings,
                                       const Lexicon* lexicon) {
  CorrelationReport report;
  std::vector<const PromptScores*> joined;
  std::vector<std::optional<double>> rating_column;
  for (const PromptScores& s : scores) {
    const auto it = ratings.find(s.prompt_id);
    if (it == ratings.end()) {
      ++report.unjoined;
      continue;
    }
    joined.push_back(&s);
    rating_column.push_back(it->second);
  }
  report.joined = joined.size();
  if (joined.empty()) {
    throw Error(ErrorCode::kNoOverlap, "no score row matches a rated id");
  }
  for (Measure m : kAllMeasures) {
    std::vector<std::optional<double>> column;
    for (const PromptScores* s : joined) column.push_back(MeasureValue(*s, m));
    report.rows.push_back(PearsonPairwise(MeasureName(m), column, rating_column));
  }
  if (lexicon != nullptr) {
    std::vector<std::optional<double>> column;
    for (const PromptScores* s : joined) {
      const LexiconEntry* entry = lexicon->Find(s->prompt_id);
      column.push_back(entry != nullptr && entry->brown_freq
                           ? std::optional<double>(*entry->brown_freq)
                           : std::nullopt);
    }
    report.rows.push_back(PearsonPairwise("brown_freq", column, rating_column));
  }
  return report;
}

}  // namespace imageability
