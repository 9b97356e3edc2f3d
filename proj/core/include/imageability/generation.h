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

#ifndef IMAGEABILITY_GENERATION_H_
#define IMAGEABILITY_GENERATION_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imageability/corpus.h"
#include "imageability/image_store.h"

namespace imageability {

inline constexpr int kMaxImagesPerPrompt = 16;

struct GenerationConfig {
  int n_images = kMaxImagesPerPrompt;  // [1, 16]
  double temperature = 0.85;
  int cond_scale = 3;  // [1, 10]
  std::string model_tag = "mock";
  uint32_t dim = kDefaultEmbeddingDim;

  // Throws kInvalidArgument when a field is out of range.
  void Validate() const;
};

// Wire protocol messages (one JSON object per line).
struct GenerationRequest {
  std::string id;
  std::string text;
  int n_images = kMaxImagesPerPrompt;
  double temperature = 0.85;
  int cond_scale = 3;

  bool operator==(const GenerationRequest&) const = default;
};

struct GeneratedImage {
  double clip_score = 0.0;
  std::vector<float> embedding;

  bool operator==(const GeneratedImage&) const = default;
};

struct GenerationResponse {
  std::string id;
  std::vector<GeneratedImage> images;
  std::optional<std::string> error;

  bool operator==(const GenerationResponse&) const = default;
};

std::string EncodeRequest(const GenerationRequest& request);
std::string EncodeResponse(const GenerationResponse& response);

// Both throw Error(kProtocolViolation); for responses the error location is
// the id when it could be recovered from the line.
GenerationRequest DecodeRequest(std::string_view line);
GenerationResponse DecodeResponse(std::string_view line);

// A generation backend answers each request exactly once, in any order.
// Transport failures throw Error(kBackendUnavailable). Lines that cannot be
// decoded are reported through `violations` (id may be empty).
struct BackendBatch {
  std::vector<GenerationResponse> responses;
  std::vector<std::pair<std::string, std::string>> violations;  // (id, why)
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendBatch Generate(std::span<const GenerationRequest> requests) = 0;
};

struct FailedPrompt {
  std::string id;
  std::string reason;

  bool operator==(const FailedPrompt&) const = default;
};

struct RequestOptions {
  size_t max_in_flight = 8;  // requests per backend round trip
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  // Exhausted batches in a row before the backend is declared unavailable.
  int max_consecutive_failed_batches = 3;
  // Called after every committed batch (for write-through caching).
  std::function<void(const ImageStore&)> checkpoint;
};

struct GenerationReport {
  size_t requested = 0;
  size_t cache_hits = 0;
  size_t generated = 0;
  size_t skipped_empty = 0;
  size_t backend_calls = 0;
  std::vector<FailedPrompt> failures;
};

// Fills `store` (which doubles as the cache) with records for every prompt it
// does not already hold. Prompts with empty text are not sent. Throws
// kDimensionMismatch (nothing of the offending prompt is stored) and
// kBackendUnavailable.
GenerationReport RequestImages(std::span<const Prompt> prompts,
                               const GenerationConfig& config, Backend& backend,
                               ImageStore& store,
                               const RequestOptions& options = {});

// Deterministic test double. Each text maps, through a seeded hash, to a
// ground-truth imageability g, a unit center vector c, a dispersion
// sigma = sigma_scale / g and a base CLIP score rising linearly in g.
struct OracleParams {
  uint64_t seed = 0;
  double ground_truth_min = 0.2;
  double ground_truth_max = 1.0;
  double sigma_scale = 0.5;
  double clip_floor = 15.0;
  double clip_ceiling = 40.0;
  double clip_jitter = 2.0;
};

struct OracleDraw {
  std::vector<double> center;  // unit norm
  double sigma = 0.0;
  double base_clip = 0.0;
};

class SyntheticOracle {
 public:
  explicit SyntheticOracle(OracleParams params = {});
  virtual ~SyntheticOracle() = default;

  virtual double GroundTruth(std::string_view text) const;
  virtual OracleDraw Describe(std::string_view text, uint32_t dim) const;

  const OracleParams& params() const { return params_; }

 protected:
  std::vector<double> Center(std::string_view text, uint32_t dim) const;

 private:
  OracleParams params_;
};

// embedding_i = normalize(c + sigma * g_i) with g_i ~ N(0, I / dim);
// clip_i = clamp(base + jitter * u_i, 0, 100) with u_i uniform in [-1, 1).
std::vector<ImageRecord> MockGenerate(const Prompt& prompt,
                                      const GenerationConfig& config,
                                      const SyntheticOracle& oracle);

class MockBackend : public Backend {
 public:
  explicit MockBackend(const SyntheticOracle& oracle,
                       uint32_t dim = kDefaultEmbeddingDim)
      : oracle_(oracle), dim_(dim) {}
  BackendBatch Generate(std::span<const GenerationRequest> requests) override;
  size_t calls() const { return calls_; }

 private:
  const SyntheticOracle& oracle_;
  uint32_t dim_;
  size_t calls_ = 0;
};

// Failure list file: "#failures v1" then id \t reason.
std::string SerializeFailures(std::span<const FailedPrompt> failures);
std::vector<FailedPrompt> ParseFailures(std::string_view content);

}  // namespace imageability

#endif  // IMAGEABILITY_GENERATION_H_
