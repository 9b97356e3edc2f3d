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

#ifndef IMAGEABILITY_PROCESS_BACKEND_H_
#define IMAGEABILITY_PROCESS_BACKEND_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "imageability/generation.h"

namespace imageability {

// Line-oriented full-duplex channel over a pair of file descriptors.
class LineChannel {
 public:
  LineChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {}

  // Writes every request line while reading response lines as they arrive,
  // until `expected` lines were read. Throws kBackendUnavailable on EOF,
  // I/O error or timeout.
  std::vector<std::string> Exchange(const std::vector<std::string>& lines,
                                    size_t expected,
                                    std::chrono::milliseconds timeout);

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

struct ProcessBackendOptions {
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};
};

// Runs `command` through /bin/sh and speaks the wire protocol over its
// stdin/stdout. The child is restarted after a transport failure.
class StdioBackend : public Backend {
 public:
  explicit StdioBackend(std::string command, ProcessBackendOptions options = {});
  ~StdioBackend() override;
  StdioBackend(const StdioBackend&) = delete;
  StdioBackend& operator=(const StdioBackend&) = delete;

  BackendBatch Generate(std::span<const GenerationRequest> requests) override;

 private:
  void Start();
  void Stop();

  std::string command_;
  ProcessBackendOptions options_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::unique_ptr<LineChannel> channel_;
};

class TcpBackend : public Backend {
 public:
  TcpBackend(std::string host, uint16_t port, ProcessBackendOptions options = {});
  ~TcpBackend() override;
  TcpBackend(const TcpBackend&) = delete;
  TcpBackend& operator=(const TcpBackend&) = delete;

  BackendBatch Generate(std::span<const GenerationRequest> requests) override;

 private:
  void Connect();
  void Close();

  std::string host_;
  uint16_t port_;
  ProcessBackendOptions options_;
  int fd_ = -1;
  std::unique_ptr<LineChannel> channel_;
};

// Decodes response lines into a batch; undecodable lines become violations.
BackendBatch DecodeBatch(const std::vector<std::string>& lines);

// "mock", "stdio:<command>" or "tcp:<host>:<port>". The oracle is used only
// by the mock backend and must outlive the result.
std::unique_ptr<Backend> MakeBackend(std::string_view spec,
                                     const SyntheticOracle& oracle,
                                     uint32_t dim,
                                     ProcessBackendOptions options = {});

}  // namespace imageability

#endif  // IMAGEABILITY_PROCESS_BACKEND_H_
