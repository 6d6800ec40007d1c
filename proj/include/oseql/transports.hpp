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

// Wire-protocol clients for models running outside this process.

#include <memory>
#include <mutex>
#include <string>
#include <sys/types.h>

#include "oseql/oracle.hpp"
#include "oseql/simulated_model.hpp"

namespace oseql {

// Talks to a long-lived child process over its stdin/stdout, one JSON
// document per line. The child is started lazily with `/bin/sh -c <target>`
// and restarted after a transport failure.
class SubprocessOracle final : public Oracle {
 public:
  explicit SubprocessOracle(OracleConfig config);
  ~SubprocessOracle() override;

  SubprocessOracle(const SubprocessOracle&) = delete;
  SubprocessOracle& operator=(const SubprocessOracle&) = delete;

  Prediction score(const ScoreRequest& request) override;
  std::vector<Prediction> score_batch(
      std::span<const ScoreRequest> requests) override;
  std::string describe() const override;

  // Number of times a child process has been spawned.
  int spawn_count() const { return spawns_; }

 private:
  std::string roundtrip(const std::string& line);
  std::string exchange_once(const std::string& line);
  void start();
  void stop();

  OracleConfig config_;
  std::mutex mutex_;
  pid_t child_ = -1;
  int fd_ = -1;
  std::string pending_;
  int spawns_ = 0;
};

// POSTs to <base>/score and <base>/score_batch.
class HttpOracle final : public Oracle {
 public:
  explicit HttpOracle(OracleConfig config);

  Prediction score(const ScoreRequest& request) override;
  std::vector<Prediction> score_batch(
      std::span<const ScoreRequest> requests) override;
  std::string describe() const override;

 private:
  std::string post(const std::string& path, const std::string& body);

  OracleConfig config_;
  std::string origin_;  // scheme://host:port
  std::string prefix_;  // optional path prefix, no trailing slash
};

// Builds the oracle named by `config`. Simulated oracles are built from
// `simulated`; callers that need to designate samples can downcast to
// SimulatedOracle.
std::unique_ptr<Oracle> make_oracle(const OracleConfig& config,
                                    const SimulatedModelParams& simulated = {});

}  // namespace oseql
