// Copyright 2026 The oseql Authors
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

#include <cerrno>
#include <chrono>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "oseql/transports.hpp"
#include "oseql/wire.hpp"
#include "retry.hpp"

namespace oseql {

using detail::TransportError;

namespace {

std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

SubprocessOracle::SubprocessOracle(OracleConfig config)
    : config_(std::move(config)) {
  config_.validate();
}

SubprocessOracle::~SubprocessOracle() {
  std::lock_guard lock(mutex_);
  stop();
}

void SubprocessOracle::start() {
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw TransportError(errno_text("socketpair"));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw TransportError(errno_text("fork"));
  }
  if (pid == 0) {
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", config_.target.c_str(),
            static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(fds[1]);
  child_ = pid;
  fd_ = fds[0];
  pending_.clear();
  ++spawns_;
}

void SubprocessOracle::stop() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  if (child_ > 0) {
    // EOF on stdin should end the child; give it a moment before killing.
    int status = 0;
    for (int i = 0; i < 20; ++i) {
      if (::waitpid(child_, &status, WNOHANG) == child_) {
        child_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(child_, SIGKILL);
    ::waitpid(child_, &status, 0);
    child_ = -1;
  }
}

std::string SubprocessOracle::exchange_once(const std::string& line) {
  if (fd_ < 0) start();

  std::string out = line + "\n";
  std::size_t sent = 0;
  while (sent < out.size()) {
    const ssize_t n =
        ::send(fd_, out.data() + sent, out.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("write to oracle process"));
    }
    sent += static_cast<std::size_t>(n);
  }

  const auto deadline = std::chrono::steady_clock::now() + config_.timeout;
  char buf[65536];
  for (;;) {
    const auto nl = pending_.find('\n');
    if (nl != std::string::npos) {
      std::string response = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      return response;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw TransportError("oracle process timed out");
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("poll"));
    }
    if (ready == 0) throw TransportError("oracle process timed out");
    const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("read from oracle process"));
    }
    if (n == 0) throw TransportError("oracle process closed its output");
    pending_.append(buf, static_cast<std::size_t>(n));
  }
}

std::string SubprocessOracle::roundtrip(const std::string& line) {
  std::lock_guard lock(mutex_);
  return detail::with_retries(
      config_.retry_count, config_.retry_backoff,
      "oracle process '" + config_.target + "'", [&] {
        try {
          return exchange_once(line);
        } catch (const TransportError&) {
          stop();
          throw;
        }
      });
}

Prediction SubprocessOracle::score(const ScoreRequest& request) {
  const auto text = roundtrip(wire::dump_line(wire::encode_request(request)));
  return wire::decode_response(wire::parse_response_text(text), request.id);
}

std::vector<Prediction> SubprocessOracle::score_batch(
    std::span<const ScoreRequest> requests) {
  if (requests.empty()) return {};
  const auto text =
      roundtrip(wire::dump_line(wire::encode_batch_request(requests)));
  return wire::decode_batch_response(wire::parse_response_text(text), requests);
}

std::string SubprocessOracle::describe() const {
  return "cmd:" + config_.target;
}

}  // namespace oseql
