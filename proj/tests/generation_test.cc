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

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "imageability/error.h"
#include "imageability/metrics.h"
#include "testing.h"

namespace imageability {
namespace {

using ::imageability::testing::MakePrompt;

constexpr uint32_t kDim = 4;

GenerationConfig SmallConfig(int n_images = 2) {
  GenerationConfig config;
  config.n_images = n_images;
  config.dim = kDim;
  return config;
}

GenerationResponse Answer(const GenerationRequest& request, int n,
                          uint32_t dim = kDim, double score = 30.0) {
  GenerationResponse response;
  response.id = request.id;
  for (int i = 0; i < n; ++i) {
    std::vector<float> embedding(dim, 0.0f);
    embedding[i % dim] = 1.0f;
    response.images.push_back({score, embedding});
  }
  return response;
}

// Backend whose behaviour per batch is a callback; failures come first.
class ScriptedBackend : public Backend {
 public:
  using Script = std::function<BackendBatch(std::span<const GenerationRequest>)>;
  explicit ScriptedBackend(Script script, int unavailable_first = 0)
      : script_(std::move(script)), unavailable_(unavailable_first) {}

  BackendBatch Generate(std::span<const GenerationRequest> requests) override {
    ++calls;
    for (const auto& r : requests) sent.push_back(r.id);
    if (unavailable_ > 0) {
      --unavailable_;
      throw Error(ErrorCode::kBackendUnavailable, "connection refused");
    }
    return script_(requests);
  }

  int calls = 0;
  std::vector<std::string> sent;

 private:
  Script script_;
  int unavailable_;
};

BackendBatch Reversed(std::span<const GenerationRequest> requests) {
  BackendBatch batch;
  for (auto it = requests.rbegin(); it != requests.rend(); ++it) {
    batch.responses.push_back(Answer(*it, it->n_images));
  }
  return batch;
}

RequestOptions FastOptions() {
  RequestOptions options;
  options.initial_backoff = std::chrono::milliseconds(1);
  options.max_in_flight = 3;
  return options;
}

TEST(ProtocolTest, RoundTrip) {
  const GenerationRequest request{"p1", "a \"quoted\" dog\n", 4, 0.85, 3};
  EXPECT_EQ(DecodeRequest(EncodeRequest(request)), request);
  GenerationResponse response = Answer(request, 2);
  response.images[1].clip_score = 27.25;
  EXPECT_EQ(DecodeResponse(EncodeResponse(response)), response);
  const GenerationResponse error{"p2", {}, "out of memory"};
  EXPECT_EQ(DecodeResponse(EncodeResponse(error)), error);
}

TEST(ProtocolTest, RejectsMalformedLines) {
  const auto code_and_id = [](std::string_view line) {
    try {
      DecodeResponse(line);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocolViolation);
      return e.location();
    }
    return std::string("<accepted>");
  };
  EXPECT_EQ(code_and_id("not json"), "");
  EXPECT_EQ(code_and_id("[1,2]"), "");
  EXPECT_EQ(code_and_id(R"({"images":[]})"), "");
  EXPECT_EQ(code_and_id(R"({"id":"x"})"), "x");
  EXPECT_EQ(code_and_id(R"({"id":"x","images":[{"clip_score":1}]})"), "x");
  EXPECT_EQ(code_and_id(R"({"id":"x","images":[{"clip_score":1,"embedding":["a"]}]})"),
            "x");
  EXPECT_THROW(DecodeRequest(R"({"id":"x","text":"t","n_images":1.5,)"
                             R"("temperature":1,"cond_scale":3})"),
               Error);
}

TEST(ConfigTest, Validate) {
  EXPECT_NO_THROW(SmallConfig().Validate());
  GenerationConfig config = SmallConfig();
  config.n_images = 17;
  EXPECT_THROW(config.Validate(), Error);
  config = SmallConfig();
  config.cond_scale = 0;
  EXPECT_THROW(config.Validate(), Error);
  config = SmallConfig();
  config.temperature = 0;
  EXPECT_THROW(config.Validate(), Error);
}

std::vector<Prompt> Prompts(int n) {
  std::vector<Prompt> prompts;
  for (int i = 0; i < n; ++i) {
    prompts.push_back(MakePrompt("p" + std::to_string(i), "text " + std::to_string(i)));
  }
  return prompts;
}

TEST(RequestImagesTest, OutOfOrderResponsesAreMatchedById) {
  ScriptedBackend backend(Reversed);
  ImageStore store(kDim);
  int checkpoints = 0;
  RequestOptions options = FastOptions();
  options.checkpoint = [&](const ImageStore&) { ++checkpoints; };
  const auto report = RequestImages(Prompts(7), SmallConfig(), backend, store, options);
  EXPECT_EQ(report.generated, 7u);
  EXPECT_TRUE(report.failures.empty());
  EXPECT_EQ(backend.calls, 3);
  EXPECT_EQ(checkpoints, 3);
  EXPECT_EQ(store.prompt_count(), 7u);
  EXPECT_EQ(store.Find("p0")->count, 2u);
}

TEST(RequestImagesTest, CacheHitsAndEmptyPrompts) {
  ScriptedBackend backend(Reversed);
  ImageStore store(kDim);
  auto prompts = Prompts(4);
  prompts.push_back(MakePrompt("empty", ""));
  RequestImages(prompts, SmallConfig(), backend, store, FastOptions());
  backend.sent.clear();
  const auto again = RequestImages(prompts, SmallConfig(), backend, store, FastOptions());
  EXPECT_EQ(again.cache_hits, 4u);
  EXPECT_EQ(again.generated, 0u);
  EXPECT_EQ(again.skipped_empty, 1u);
  EXPECT_TRUE(backend.sent.empty());
  ASSERT_EQ(again.failures.size(), 1u);
  EXPECT_EQ(again.failures[0].id, "empty");
}

TEST(RequestImagesTest, PerPromptFailuresDoNotStopTheRun) {
  ScriptedBackend backend([](std::span<const GenerationRequest> requests) {
    BackendBatch batch;
    for (const auto& r : requests) {
      if (r.id == "p0") {
        batch.responses.push_back({r.id, {}, "model crashed"});
      } else if (r.id == "p1") {
        batch.responses.push_back(Answer(r, r.n_images + 1));
      } else if (r.id == "p2") {
        batch.responses.push_back(Answer(r, r.n_images, kDim, 120.0));
      } else if (r.id == "p3") {
        batch.violations.push_back({r.id, "garbled"});
      } else if (r.id == "p4") {
        // no answer at all
      } else if (r.id == "p5") {
        batch.responses.push_back(Answer(r, 1));  // fewer is fine
      } else {
        batch.responses.push_back(Answer(r, r.n_images));
        batch.responses.push_back(Answer(r, r.n_images));
      }
    }
    return batch;
  });
  ImageStore store(kDim);
  RequestOptions options = FastOptions();
  options.max_in_flight = 8;
  const auto report = RequestImages(Prompts(7), SmallConfig(), backend, store, options);
  EXPECT_EQ(report.generated, 1u);
  EXPECT_TRUE(store.Contains("p5"));
  ASSERT_EQ(report.failures.size(), 6u);
  std::vector<std::string> failed;
  for (const auto& f : report.failures) failed.push_back(f.id);
  EXPECT_EQ(failed, (std::vector<std::string>{"p0", "p1", "p2", "p3", "p4", "p6"}));
  EXPECT_NE(report.failures[1].reason.find("more images"), std::string::npos);
}

TEST(RequestImagesTest, WrongDimensionIsFatal) {
  ScriptedBackend backend([](std::span<const GenerationRequest> requests) {
    BackendBatch batch;
    for (const auto& r : requests) batch.responses.push_back(Answer(r, 2, kDim + 1));
    return batch;
  });
  ImageStore store(kDim);
  try {
    RequestImages(Prompts(2), SmallConfig(), backend, store, FastOptions());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  EXPECT_EQ(store.rows(), 0u);
  ImageStore wrong(kDim + 1);
  EXPECT_THROW(RequestImages(Prompts(1), SmallConfig(), backend, wrong), Error);
}

TEST(RequestImagesTest, RetriesTransientUnavailability) {
  ScriptedBackend backend(Reversed, 2);
  ImageStore store(kDim);
  const auto report = RequestImages(Prompts(2), SmallConfig(), backend, store, FastOptions());
  EXPECT_EQ(report.generated, 2u);
  EXPECT_EQ(report.backend_calls, 3u);
}

TEST(RequestImagesTest, GivesUpAfterConsecutiveFailedBatches) {
  ScriptedBackend backend(Reversed, 1000);
  ImageStore store(kDim);
  RequestOptions options = FastOptions();
  options.max_in_flight = 1;
  bool saved = false;
  options.checkpoint = [&](const ImageStore&) { saved = true; };
  try {
    RequestImages(Prompts(5), SmallConfig(), backend, store, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(backend.calls, 9);
  EXPECT_TRUE(saved);
}

TEST(MockTest, DeterministicAndWellFormed) {
  const SyntheticOracle oracle({.seed = 11});
  GenerationConfig config = SmallConfig(16);
  config.dim = 64;
  const Prompt prompt = MakePrompt("x", "a red bird");
  const auto a = MockGenerate(prompt, config, oracle);
  EXPECT_EQ(a, MockGenerate(prompt, config, oracle));
  ASSERT_EQ(a.size(), 16u);
  for (const auto& record : a) {
    double norm = 0;
    for (float v : record.embedding) norm += double{v} * v;
    EXPECT_NEAR(norm, 1.0, 1e-5);
    EXPECT_GE(record.clip_score, 0.0f);
    EXPECT_LE(record.clip_score, 100.0f);
  }
  const SyntheticOracle other({.seed = 12});
  EXPECT_NE(MockGenerate(prompt, config, other), a);
}

TEST(MockTest, SimilarityTracksGroundTruth) {
  const SyntheticOracle oracle({.seed = 3});
  GenerationConfig config = SmallConfig(16);
  config.dim = 128;
  std::vector<std::pair<double, double>> points;
  for (int i = 0; i < 50; ++i) {
    const Prompt p = MakePrompt("p", "prompt " + std::to_string(i));
    const auto records = MockGenerate(p, config, oracle);
    points.emplace_back(oracle.GroundTruth(p.text), *ImgSim(records).value);
  }
  std::sort(points.begin(), points.end());
  EXPECT_LT(points.front().second, points.back().second);
}

TEST(FailuresTest, RoundTrip) {
  const std::vector<FailedPrompt> failures = {{"a", "backend error: x"},
                                              {"b", ""}};
  EXPECT_EQ(ParseFailures(SerializeFailures(failures)), failures);
  const std::vector<FailedPrompt> tabbed = {{"c", "one\ttwo"}};
  EXPECT_EQ(ParseFailures(SerializeFailures(tabbed))[0].reason, "one two");
  EXPECT_THROW(ParseFailures("a\tb\n"), Error);
}

}  // namespace
}  // namespace imageability
