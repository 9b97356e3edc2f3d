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

#include "imageability/process_backend.h"

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "imageability/error.h"
#include "testing.h"

extern char** environ;

namespace imageability {
namespace {

using ::imageability::testing::MakePrompt;

std::string Sidecar(std::string_view flags = {}) {
  std::string command = "stdio:" IMAGEABILITY_FAKE_SIDECAR;
  if (!flags.empty()) command += " " + std::string(flags);
  return command;
}

std::vector<GenerationRequest> Requests(int n, int n_images = 2) {
  std::vector<GenerationRequest> requests;
  for (int i = 0; i < n; ++i) {
    requests.push_back({"r" + std::to_string(i), "text " + std::to_string(i),
                        n_images, 0.85, 3});
  }
  return requests;
}

const SyntheticOracle& Oracle() {
  static const SyntheticOracle oracle;
  return oracle;
}

ProcessBackendOptions Quick() {
  ProcessBackendOptions options;
  options.timeout = std::chrono::seconds(20);
  return options;
}

TEST(StdioBackendTest, AnswersEveryRequest) {
  auto backend = MakeBackend(Sidecar(), Oracle(), 8, Quick());
  const auto requests = Requests(20);
  const BackendBatch batch = backend->Generate(requests);
  ASSERT_EQ(batch.responses.size(), 20u);
  EXPECT_TRUE(batch.violations.empty());
  EXPECT_EQ(batch.responses[3].id, "r3");
  EXPECT_EQ(batch.responses[3].images.size(), 2u);
  EXPECT_EQ(batch.responses[3].images[0].embedding.size(), 8u);
  // The channel stays usable for further batches.
  EXPECT_EQ(backend->Generate(Requests(3)).responses.size(), 3u);
}

TEST(StdioBackendTest, MatchesSidecarToMockBitForBit) {
  auto sidecar = MakeBackend(Sidecar("--dim 16"), Oracle(), 16, Quick());
  auto mock = MakeBackend("mock", Oracle(), 16);
  const auto requests = Requests(5, 4);
  EXPECT_EQ(sidecar->Generate(requests).responses,
            mock->Generate(requests).responses);
}

TEST(StdioBackendTest, OutOfOrderRepliesFeedTheStore) {
  auto backend = MakeBackend(Sidecar("--reverse"), Oracle(), 8, Quick());
  const BackendBatch batch = backend->Generate(Requests(6));
  ASSERT_EQ(batch.responses.size(), 6u);
  EXPECT_EQ(batch.responses.front().id, "r5");

  std::vector<Prompt> prompts;
  for (int i = 0; i < 10; ++i) {
    prompts.push_back(MakePrompt("p" + std::to_string(i), "words " + std::to_string(i)));
  }
  GenerationConfig config;
  config.dim = 8;
  config.n_images = 3;
  ImageStore store(8);
  const auto report = RequestImages(prompts, config, *backend, store);
  EXPECT_EQ(report.generated, 10u);
  EXPECT_EQ(store.rows(), 30u);
}

TEST(StdioBackendTest, MalformedLineBecomesViolation) {
  auto backend = MakeBackend(Sidecar("--garble r1"), Oracle(), 8, Quick());
  const BackendBatch batch = backend->Generate(Requests(3));
  EXPECT_EQ(batch.responses.size(), 2u);
  ASSERT_EQ(batch.violations.size(), 1u);
}

TEST(StdioBackendTest, WrongDimensionAbortsGeneration) {
  auto backend = MakeBackend(Sidecar("--dim 6"), Oracle(), 8, Quick());
  GenerationConfig config;
  config.dim = 8;
  config.n_images = 2;
  ImageStore store(8);
  const std::vector<Prompt> prompts = {MakePrompt("a", "a dog")};
  try {
    RequestImages(prompts, config, *backend, store);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(StdioBackendTest, DeadChildIsUnavailableThenRestarted) {
  auto backend = MakeBackend(Sidecar("--exit-after 2"), Oracle(), 8, Quick());
  try {
    backend->Generate(Requests(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(backend->Generate(Requests(2)).responses.size(), 2u);
}

TEST(StdioBackendTest, MissingCommandIsUnavailable) {
  auto backend = MakeBackend("stdio:/nonexistent/sidecar", Oracle(), 8, Quick());
  EXPECT_THROW(backend->Generate(Requests(1)), Error);
}

TEST(MakeBackendTest, RejectsBadSpecs) {
  EXPECT_THROW(MakeBackend("grpc:x", Oracle(), 8), Error);
  EXPECT_THROW(MakeBackend("tcp:localhost", Oracle(), 8), Error);
  EXPECT_THROW(MakeBackend("tcp:localhost:0", Oracle(), 8), Error);
  EXPECT_THROW(MakeBackend("stdio:", Oracle(), 8), Error);
}

TEST(TcpBackendTest, SpeaksProtocolOverSocket) {
  testing::TempDir dir;
  const std::string port_file = (dir / "port").string();
  const std::string binary = IMAGEABILITY_FAKE_SIDECAR;
  std::vector<std::string> args = {binary, "--reverse", "--tcp", port_file};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = -1;
  ASSERT_EQ(posix_spawn(&pid, binary.c_str(), nullptr, nullptr, argv.data(), environ), 0);

  std::string port;
  for (int i = 0; i < 200 && port.empty(); ++i) {
    std::ifstream(port_file) >> port;
    if (port.empty()) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ASSERT_FALSE(port.empty());
  {
    auto backend = MakeBackend("tcp:127.0.0.1:" + port, Oracle(), 8, Quick());
    const BackendBatch batch = backend->Generate(Requests(4));
    ASSERT_EQ(batch.responses.size(), 4u);
    EXPECT_EQ(batch.responses[0].id, "r3");
  }
  int status = 0;
  waitpid(pid, &status, 0);
  EXPECT_TRUE(WIFEXITED(status));
}

TEST(TcpBackendTest, RefusedConnectionIsUnavailable) {
  auto backend = MakeBackend("tcp:127.0.0.1:1", Oracle(), 8, Quick());
  try {
    backend->Generate(Requests(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
}

TEST(DecodeBatchTest, SplitsGoodAndBadLines) {
  const auto batch = DecodeBatch({R"({"id":"a","images":[]})", "garbage",
                                  R"({"id":"b"})"});
  EXPECT_EQ(batch.responses.size(), 1u);
  ASSERT_EQ(batch.violations.size(), 2u);
  EXPECT_EQ(batch.violations[1].first, "b");
}

}  // namespace
}  // namespace imageability
