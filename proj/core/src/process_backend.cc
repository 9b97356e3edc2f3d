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

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "imageability/error.h"
#include "imageability/io.h"

namespace imageability {
namespace {

[[noreturn]] void Unavailable(const std::string& message) {
  throw Error(ErrorCode::kBackendUnavailable, message);
}

void IgnoreSigpipe() {
  struct sigaction action {};
  action.sa_handler = SIG_IGN;
  sigaction(SIGPIPE, &action, nullptr);
}

void SetNonBlocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  if (flags >= 0) fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

std::vector<std::string> EncodeAll(std::span<const GenerationRequest> requests) {
  std::vector<std::string> lines;
  lines.reserve(requests.size());
  for (const GenerationRequest& request : requests) {
    lines.push_back(EncodeRequest(request));
  }
  return lines;
}

}  // namespace

std::vector<std::string> LineChannel::Exchange(
    const std::vector<std::string>& lines, size_t expected,
    std::chrono::milliseconds timeout) {
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  size_t written = 0;
  std::vector<std::string> received;
  const auto deadline = std::chrono::steady_clock::now() + timeout;

  const auto drain_lines = [&] {
    size_t pos;
    while (received.size() < expected &&
           (pos = buffer_.find('\n')) != std::string::npos) {
      std::string line = buffer_.substr(0, pos);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      buffer_.erase(0, pos + 1);
      if (!line.empty()) received.push_back(std::move(line));
    }
  };
  drain_lines();

  while (received.size() < expected || written < out.size()) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) Unavailable("backend timed out");

    pollfd fds[2];
    nfds_t count = 0;
    const bool want_write = written < out.size();
    const bool want_read = received.size() < expected;
    if (read_fd_ == write_fd_) {
      fds[0] = {read_fd_,
                static_cast<short>((want_read ? POLLIN : 0) |
                                   (want_write ? POLLOUT : 0)),
                0};
      count = 1;
    } else {
      if (want_read) fds[count++] = {read_fd_, POLLIN, 0};
      if (want_write) fds[count++] = {write_fd_, POLLOUT, 0};
    }
    const int ready = poll(fds, count, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      Unavailable(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) Unavailable("backend timed out");

    for (nfds_t i = 0; i < count; ++i) {
      const pollfd& fd = fds[i];
      if (want_write && fd.fd == write_fd_ && (fd.revents & (POLLOUT | POLLERR))) {
        const ssize_t n = write(write_fd_, out.data() + written, out.size() - written);
        if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
          Unavailable(std::string("write to backend failed: ") +
                      std::strerror(errno));
        }
        if (n > 0) written += static_cast<size_t>(n);
      }
      if (want_read && fd.fd == read_fd_ &&
          (fd.revents & (POLLIN | POLLHUP | POLLERR))) {
        char chunk[65536];
        const ssize_t n = read(read_fd_, chunk, sizeof(chunk));
        if (n == 0) Unavailable("backend closed the stream");
        if (n < 0) {
          if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
          Unavailable(std::string("read from backend failed: ") +
                      std::strerror(errno));
        }
        buffer_.append(chunk, static_cast<size_t>(n));
        drain_lines();
      }
    }
  }
  return received;
}

BackendBatch DecodeBatch(const std::vector<std::string>& lines) {
  BackendBatch batch;
  for (const std::string& line : lines) {
    try {
      batch.responses.push_back(DecodeResponse(line));
    } catch (const Error& e) {
      batch.violations.emplace_back(e.location(), e.what());
    }
  }
  return batch;
}

StdioBackend::StdioBackend(std::string command, ProcessBackendOptions options)
    : command_(std::move(command)), options_(options) {
  IgnoreSigpipe();
  Start();
}

StdioBackend::~StdioBackend() { Stop(); }

void StdioBackend::Start() {
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0) Unavailable("pipe failed");
  if (pipe(from_child) != 0) {
    close(to_child[0]);
    close(to_child[1]);
    Unavailable("pipe failed");
  }
  const pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) close(fd);
    Unavailable("fork failed");
  }
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  pid_ = pid;
  to_child_ = to_child[1];
  from_child_ = from_child[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  SetNonBlocking(to_child_);
  channel_ = std::make_unique<LineChannel>(from_child_, to_child_);
}

void StdioBackend::Stop() {
  channel_.reset();
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    // Closing stdin asks the sidecar to exit; give it a moment, then kill.
    for (int i = 0; i < 50; ++i) {
      if (waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      usleep(10000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
  }
  pid_ = -1;
}

BackendBatch StdioBackend::Generate(
    std::span<const GenerationRequest> requests) {
  if (!channel_) Start();
  try {
    return DecodeBatch(
        channel_->Exchange(EncodeAll(requests), requests.size(), options_.timeout));
  } catch (const Error&) {
    Stop();
    throw;
  }
}

TcpBackend::TcpBackend(std::string host, uint16_t port,
                       ProcessBackendOptions options)
    : host_(std::move(host)), port_(port), options_(options) {
  IgnoreSigpipe();
}

TcpBackend::~TcpBackend() { Close(); }

void TcpBackend::Connect() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* results = nullptr;
  const std::string port = std::to_string(port_);
  if (getaddrinfo(host_.c_str(), port.c_str(), &hints, &results) != 0) {
    Unavailable("cannot resolve " + host_);
  }
  int fd = -1;
  for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
    fd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    close(fd);
    fd = -1;
  }
  freeaddrinfo(results);
  if (fd < 0) Unavailable("cannot connect to " + host_ + ":" + port);
  fcntl(fd, F_SETFD, FD_CLOEXEC);
  SetNonBlocking(fd);
  fd_ = fd;
  channel_ = std::make_unique<LineChannel>(fd_, fd_);
}

void TcpBackend::Close() {
  channel_.reset();
  if (fd_ >= 0) close(fd_);
  fd_ = -1;
}

BackendBatch TcpBackend::Generate(std::span<const GenerationRequest> requests) {
  if (!channel_) Connect();
  try {
    return DecodeBatch(
        channel_->Exchange(EncodeAll(requests), requests.size(), options_.timeout));
  } catch (const Error&) {
    Close();
    throw;
  }
}

std::unique_ptr<Backend> MakeBackend(std::string_view spec,
                                     const SyntheticOracle& oracle,
                                     uint32_t dim,
                                     ProcessBackendOptions options) {
  if (spec == "mock") return std::make_unique<MockBackend>(oracle, dim);
  if (spec.starts_with("stdio:") && spec.size() > 6) {
    return std::make_unique<StdioBackend>(std::string(spec.substr(6)), options);
  }
  if (spec.starts_with("tcp:")) {
    const std::string_view rest = spec.substr(4);
    const size_t colon = rest.rfind(':');
    const auto port =
        colon == std::string_view::npos ? std::nullopt : ParseInt(rest.substr(colon + 1));
    if (colon == 0 || !port || *port <= 0 || *port > 65535) {
      throw Error(ErrorCode::kInvalidArgument,
                  "tcp backend must look like tcp:<host>:<port>");
    }
    return std::make_unique<TcpBackend>(std::string(rest.substr(0, colon)),
                                        static_cast<uint16_t>(*port), options);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown backend '" + std::string(spec) +
                  "' (expected mock, stdio:<cmd> or tcp:<host:port>)");
}

}  // namespace imageability
