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

#pragma once

#include <chrono>
#include <string>
#include <thread>

#include "oseql/error.hpp"

namespace oseql::detail {

// Raised by transports for failures worth retrying (connection refused,
// timeout, child exited, HTTP 5xx). Never escapes an oracle.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Runs `attempt` up to 1 + retries times with exponential backoff between
// attempts. Protocol errors propagate immediately.
template <typename F>
auto with_retries(int retries, std::chrono::milliseconds backoff,
                  const std::string& what, F&& attempt) {
  for (int i = 0;; ++i) {
    try {
      return attempt();
    } catch (const TransportError& e) {
      if (i >= retries) {
        throw OracleUnavailable(what + ": " + e.what() + " (after " +
                                std::to_string(i + 1) + " attempts)");
      }
      std::this_thread::sleep_for(backoff * (1 << i));
    }
  }
}

}  // namespace oseql::detail
