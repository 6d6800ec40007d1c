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

// Black-box access to the classifier under audit.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oseql/occlusion.hpp"

namespace oseql {

inline constexpr double kDecisionThreshold = 0.5;

// Model output for one input. `score` is P(class 1); the class is derived by
// thresholding at 0.5 so the two can never disagree.
class Prediction {
 public:
  Prediction() = default;
  // Throws InvalidArgument unless 0 <= score <= 1.
  explicit Prediction(double score);

  double score() const { return score_; }
  int class_label() const { return score_ >= kDecisionThreshold ? 1 : 0; }

  bool operator==(const Prediction&) const = default;

 private:
  double score_ = 0.0;
};

// One scoring request, in the shape the wire protocol transmits.
struct ScoreRequest {
  std::string id;
  TaskKind task = TaskKind::Single;
  std::string code_a;
  std::optional<std::string> code_b;

  static ScoreRequest from(const CodeInput& input);
  static ScoreRequest from(const OccludedVariant& variant, TaskKind task,
                           std::string id);
};

class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual Prediction score(const ScoreRequest& request) = 0;

  // Order-preserving. The default maps score() over the requests; transports
  // with a batch endpoint override it.
  virtual std::vector<Prediction> score_batch(
      std::span<const ScoreRequest> requests);

  virtual std::string describe() const = 0;
};

enum class OracleKind { Subprocess, Http, Simulated };

struct OracleConfig {
  OracleKind kind = OracleKind::Simulated;
  std::string target;  // shell command line or base URL
  std::size_t batch_size = 32;
  std::chrono::milliseconds timeout{30000};
  int retry_count = 2;
  std::chrono::milliseconds retry_backoff{100};

  // Throws InvalidArgument when batch_size or timeout is not positive.
  void validate() const;
};

// Parses `simulated`, `cmd:<command line>` or `http:<url>`.
OracleConfig parse_oracle_spec(std::string_view spec);

// Wraps another oracle and counts requests. Thread-safe.
class CountingOracle final : public Oracle {
 public:
  explicit CountingOracle(Oracle& inner) : inner_(inner) {}

  Prediction score(const ScoreRequest& request) override;
  std::vector<Prediction> score_batch(
      std::span<const ScoreRequest> requests) override;
  std::string describe() const override;

  std::size_t calls() const { return calls_.load(); }
  void reset() { calls_ = 0; }

 private:
  Oracle& inner_;
  std::atomic<std::size_t> calls_{0};
};

// Scores `requests` in chunks of `batch_size`, running up to `concurrency`
// chunks at a time. Results come back in request order.
std::vector<Prediction> score_all(Oracle& oracle,
                                  std::span<const ScoreRequest> requests,
                                  std::size_t batch_size,
                                  std::size_t concurrency);

}  // namespace oseql
