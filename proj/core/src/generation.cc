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

#include "imageability/generation.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "imageability/error.h"
#include "imageability/io.h"
#include "imageability/rng.h"
#include "imageability/text.h"

namespace imageability {
namespace {

using nlohmann::json;

constexpr std::string_view kFailuresMagic = "#failures v1";

[[noreturn]] void Violation(const std::string& message,
                            const std::string& id = {}) {
  throw Error(ErrorCode::kProtocolViolation, message, id);
}

json ParseObject(std::string_view line) {
  json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    Violation("line is not a JSON object");
  }
  return doc;
}

std::string RequireString(const json& doc, const char* key,
                          const std::string& id) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    Violation(std::string("missing string field '") + key + "'", id);
  }
  return it->get<std::string>();
}

bool ScoreInRange(double score) {
  return std::isfinite(score) && score >= 0.0 && score <= 100.0;
}

}  // namespace

void GenerationConfig::Validate() const {
  if (n_images < 1 || n_images > kMaxImagesPerPrompt) {
    throw Error(ErrorCode::kInvalidArgument, "n_images must be in [1, 16]");
  }
  if (cond_scale < 1 || cond_scale > 10) {
    throw Error(ErrorCode::kInvalidArgument, "cond_scale must be in [1, 10]");
  }
  if (!std::isfinite(temperature) || temperature <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be positive");
  }
  if (dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be > 0");
  }
}

std::string EncodeRequest(const GenerationRequest& request) {
  json doc = {{"id", request.id},
              {"text", request.text},
              {"n_images", request.n_images},
              {"temperature", request.temperature},
              {"cond_scale", request.cond_scale}};
  return doc.dump();
}

std::string EncodeResponse(const GenerationResponse& response) {
  json images = json::array();
  for (const GeneratedImage& image : response.images) {
    images.push_back({{"clip_score", image.clip_score},
                      {"embedding", image.embedding}});
  }
  json doc = {{"id", response.id}, {"images", std::move(images)}};
  if (response.error) doc["error"] = *response.error;
  return doc.dump();
}

GenerationRequest DecodeRequest(std::string_view line) {
  const json doc = ParseObject(line);
  GenerationRequest request;
  request.id = RequireString(doc, "id", {});
  request.text = RequireString(doc, "text", request.id);
  const auto n = doc.find("n_images");
  const auto temperature = doc.find("temperature");
  const auto cond = doc.find("cond_scale");
  if (n == doc.end() || !n->is_number_integer() || temperature == doc.end() ||
      !temperature->is_number() || cond == doc.end() ||
      !cond->is_number_integer()) {
    Violation("request needs integer n_images, numeric temperature and "
              "integer cond_scale",
              request.id);
  }
  request.n_images = n->get<int>();
  request.temperature = temperature->get<double>();
  request.cond_scale = cond->get<int>();
  return request;
}

GenerationResponse DecodeResponse(std::string_view line) {
  const json doc = ParseObject(line);
  GenerationResponse response;
  response.id = RequireString(doc, "id", {});
  if (const auto error = doc.find("error");
      error != doc.end() && !error->is_null()) {
    if (!error->is_string()) Violation("'error' must be a string", response.id);
    response.error = error->get<std::string>();
  }
  const auto images = doc.find("images");
  if (images == doc.end() || images->is_null()) {
    if (!response.error) Violation("missing 'images' array", response.id);
    return response;
  }
  if (!images->is_array()) Violation("'images' must be an array", response.id);
  for (const json& item : *images) {
    const auto score = item.is_object() ? item.find("clip_score") : item.end();
    const auto embedding = item.is_object() ? item.find("embedding") : item.end();
    if (!item.is_object() || score == item.end() || !score->is_number() ||
        embedding == item.end() || !embedding->is_array()) {
      Violation("image entries need numeric clip_score and embedding array",
                response.id);
    }
    GeneratedImage image;
    image.clip_score = score->get<double>();
    image.embedding.reserve(embedding->size());
    for (const json& value : *embedding) {
      if (!value.is_number()) Violation("non-numeric embedding value", response.id);
      image.embedding.push_back(value.get<float>());
    }
    response.images.push_back(std::move(image));
  }
  return response;
}

GenerationReport RequestImages(std::span<const Prompt> prompts,
                               const GenerationConfig& config, Backend& backend,
                               ImageStore& store,
                               const RequestOptions& options) {
  config.Validate();
  if (store.dim() != config.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "store dimension " + std::to_string(store.dim()) +
                    " differs from configured " + std::to_string(config.dim));
  }
  GenerationReport report;
  report.requested = prompts.size();

  std::vector<const Prompt*> pending;
  std::unordered_set<std::string> seen;
  for (const Prompt& prompt : prompts) {
    if (!seen.insert(prompt.id).second) continue;
    if (store.Contains(prompt.id)) {
      ++report.cache_hits;
    } else if (prompt.text.empty()) {
      ++report.skipped_empty;
      report.failures.push_back({prompt.id, "empty prompt"});
    } else {
      pending.push_back(&prompt);
    }
  }

  const size_t batch_size = std::max<size_t>(1, options.max_in_flight);
  int consecutive_failed = 0;
  for (size_t begin = 0; begin < pending.size(); begin += batch_size) {
    const size_t end = std::min(pending.size(), begin + batch_size);
    std::vector<GenerationRequest> requests;
    for (size_t i = begin; i < end; ++i) {
      requests.push_back({pending[i]->id, pending[i]->text, config.n_images,
                          config.temperature, config.cond_scale});
    }

    std::optional<BackendBatch> batch;
    std::string last_error;
    for (int attempt = 0; attempt < std::max(1, options.max_attempts);
         ++attempt) {
      try {
        ++report.backend_calls;
        batch = backend.Generate(requests);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kBackendUnavailable) throw;
        last_error = e.what();
        if (attempt + 1 < options.max_attempts) {
          std::this_thread::sleep_for(options.initial_backoff * (1 << attempt));
        }
      }
    }
    if (!batch) {
      for (const GenerationRequest& request : requests) {
        report.failures.push_back(
            {request.id, "backend unavailable: " + last_error});
      }
      if (++consecutive_failed >= options.max_consecutive_failed_batches) {
        if (options.checkpoint) options.checkpoint(store);
        throw Error(ErrorCode::kBackendUnavailable,
                    "backend failed " + std::to_string(consecutive_failed) +
                        " consecutive batches: " + last_error);
      }
      continue;
    }
    consecutive_failed = 0;

    std::unordered_map<std::string, const GenerationResponse*> by_id;
    std::unordered_map<std::string, std::string> violation_for;
    for (const auto& [id, why] : batch->violations) {
      if (!id.empty()) violation_for.emplace(id, why);
    }
    for (const GenerationResponse& response : batch->responses) {
      if (!by_id.emplace(response.id, &response).second) {
        violation_for.emplace(response.id, "duplicate response");
      }
    }

    for (const GenerationRequest& request : requests) {
      const auto fail = [&](std::string reason) {
        report.failures.push_back({request.id, std::move(reason)});
      };
      if (const auto v = violation_for.find(request.id);
          v != violation_for.end()) {
        fail("protocol violation: " + v->second);
        continue;
      }
      const auto it = by_id.find(request.id);
      if (it == by_id.end()) {
        fail("protocol violation: no response for id");
        continue;
      }
      const GenerationResponse& response = *it->second;
      if (response.error) {
        fail("backend error: " + *response.error);
        continue;
      }
      if (response.images.empty()) {
        fail("no images");
        continue;
      }
      if (response.images.size() > static_cast<size_t>(config.n_images)) {
        fail("protocol violation: more images than requested");
        continue;
      }
      bool scores_ok = true;
      for (const GeneratedImage& image : response.images) {
        scores_ok = scores_ok && ScoreInRange(image.clip_score);
        if (image.embedding.size() != config.dim) {
          if (options.checkpoint) options.checkpoint(store);
          throw Error(ErrorCode::kDimensionMismatch,
                      "embedding length " +
                          std::to_string(image.embedding.size()) +
                          " differs from D=" + std::to_string(config.dim),
                      request.id);
        }
      }
      if (!scores_ok) {
        fail("protocol violation: clip_score outside [0,100]");
        continue;
      }
      std::vector<ImageRecord> records;
      records.reserve(response.images.size());
      for (size_t i = 0; i < response.images.size(); ++i) {
        records.push_back({request.id, i,
                           static_cast<float>(response.images[i].clip_score),
                           response.images[i].embedding});
      }
      store.Add(request.id, records);
      ++report.generated;
    }
    if (options.checkpoint) options.checkpoint(store);
  }
  return report;
}

SyntheticOracle::SyntheticOracle(OracleParams params) : params_(params) {
  if (!(params_.ground_truth_min > 0.0) ||
      params_.ground_truth_max < params_.ground_truth_min) {
    throw Error(ErrorCode::kInvalidArgument,
                "oracle ground truth range must be positive and ordered");
  }
}

double SyntheticOracle::GroundTruth(std::string_view text) const {
  const uint64_t bits = DeriveSeed(params_.seed, "truth/" + std::string(text));
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return params_.ground_truth_min +
         (params_.ground_truth_max - params_.ground_truth_min) * u;
}

std::vector<double> SyntheticOracle::Center(std::string_view text,
                                            uint32_t dim) const {
  Rng rng(DeriveSeed(params_.seed, "center/" + std::string(text)));
  std::vector<double> center(dim);
  double norm = 0.0;
  for (double& value : center) {
    value = rng.Gaussian();
    norm += value * value;
  }
  norm = std::sqrt(norm);
  for (double& value : center) value /= norm;
  return center;
}

OracleDraw SyntheticOracle::Describe(std::string_view text,
                                     uint32_t dim) const {
  const double g = GroundTruth(text);
  OracleDraw draw;
  draw.center = Center(text, dim);
  draw.sigma = params_.sigma_scale / g;
  const double span = params_.ground_truth_max - params_.ground_truth_min;
  const double t = span > 0.0 ? (g - params_.ground_truth_min) / span : 1.0;
  draw.base_clip =
      params_.clip_floor + (params_.clip_ceiling - params_.clip_floor) * t;
  return draw;
}

std::vector<ImageRecord> MockGenerate(const Prompt& prompt,
                                      const GenerationConfig& config,
                                      const SyntheticOracle& oracle) {
  const OracleDraw draw = oracle.Describe(prompt.text, config.dim);
  Rng rng(DeriveSeed(oracle.params().seed, "images/" + prompt.text));
  const double noise_scale = draw.sigma / std::sqrt(static_cast<double>(config.dim));

  std::vector<ImageRecord> records;
  std::vector<double> v(config.dim);
  for (int i = 0; i < config.n_images; ++i) {
    double norm = 0.0;
    for (uint32_t d = 0; d < config.dim; ++d) {
      v[d] = draw.center[d] + noise_scale * rng.Gaussian();
      norm += v[d] * v[d];
    }
    norm = std::sqrt(norm);
    ImageRecord record;
    record.prompt_id = prompt.id;
    record.image_index = static_cast<size_t>(i);
    record.embedding.resize(config.dim);
    for (uint32_t d = 0; d < config.dim; ++d) {
      record.embedding[d] = static_cast<float>(norm > 0.0 ? v[d] / norm : v[d]);
    }
    const double jitter = oracle.params().clip_jitter * (2.0 * rng.Uniform() - 1.0);
    record.clip_score =
        static_cast<float>(std::clamp(draw.base_clip + jitter, 0.0, 100.0));
    records.push_back(std::move(record));
  }
  return records;
}

BackendBatch MockBackend::Generate(std::span<const GenerationRequest> requests) {
  ++calls_;
  BackendBatch batch;
  GenerationConfig config;
  config.dim = dim_;
  for (const GenerationRequest& request : requests) {
    Prompt prompt;
    prompt.id = request.id;
    prompt.text = request.text;
    config.n_images = std::clamp(request.n_images, 1, kMaxImagesPerPrompt);
    GenerationResponse response;
    response.id = request.id;
    for (ImageRecord& record : MockGenerate(prompt, config, oracle_)) {
      response.images.push_back({record.clip_score, std::move(record.embedding)});
    }
    batch.responses.push_back(std::move(response));
  }
  return batch;
}

std::string SerializeFailures(std::span<const FailedPrompt> failures) {
  std::string out(kFailuresMagic);
  out += '\n';
  for (const FailedPrompt& failure : failures) {
    std::string reason = failure.reason;
    std::replace_if(reason.begin(), reason.end(),
                    [](char c) { return c == '\t' || c == '\n' || c == '\r'; },
                    ' ');
    out += failure.id + '\t' + reason + '\n';
  }
  return out;
}

std::vector<FailedPrompt> ParseFailures(std::string_view content) {
  std::vector<FailedPrompt> failures;
  const auto lines = SplitLines(content);
  if (lines.empty() || lines[0] != kFailuresMagic) {
    throw Error(ErrorCode::kBadMagic, "missing '#failures v1' header");
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].starts_with('#')) continue;
    const size_t tab = lines[i].find('\t');
    if (tab == std::string::npos) {
      failures.push_back({lines[i], ""});
    } else {
      failures.push_back({lines[i].substr(0, tab), lines[i].substr(tab + 1)});
    }
  }
  return failures;
}

}  // namespace imageability
