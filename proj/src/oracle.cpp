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

#include "oseql/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>

#include "oseql/error.hpp"

namespace oseql {

Prediction::Prediction(double score) : score_(score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw InvalidArgument("prediction score " + std::to_string(score) +
                          " outside [0,1]");
  }
}

ScoreRequest ScoreRequest::from(const CodeInput& input) {
  return ScoreRequest{input.id, input.task, input.snippet_a, input.snippet_b};
}

ScoreRequest ScoreRequest::from(const OccludedVariant& variant, TaskKind task,
                                std::string id) {
  ScoreRequest r{std::move(id), task, variant.code_a, std::nullopt};
  if (task == TaskKind::Paired) r.code_b = variant.code_b.value_or("");
  return r;
}

std::vector<Prediction> Oracle::score_batch(
    std::span<const ScoreRequest> requests) {
  std::vector<Prediction> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(score(r));
  return out;
}

void OracleConfig::validate() const {
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (timeout.count() <= 0) throw InvalidArgument("timeout must be > 0");
  if (retry_count < 0) throw InvalidArgument("retry_count must be >= 0");
  if (kind != OracleKind::Simulated && target.empty()) {
    throw InvalidArgument("oracle target must not be empty");
  }
}

OracleConfig parse_oracle_spec(std::string_view spec) {
  OracleConfig cfg;
  if (spec == "simulated") {
    cfg.kind = OracleKind::Simulated;
  } else if (spec.starts_with("cmd:")) {
    cfg.kind = OracleKind::Subprocess;
    cfg.target = std::string(spec.substr(4));
  } else if (spec.starts_with("http:")) {
    cfg.kind = OracleKind::Http;
    // Accept both http:<host:port> and http:http://host:port.
    std::string_view rest = spec.substr(5);
    if (rest.starts_with("//")) rest.remove_prefix(2);
    if (rest.starts_with("https://")) {
      throw InvalidArgument("https oracles are not supported");
    }
    if (rest.starts_with("http://")) rest.remove_prefix(7);
    if (rest.empty()) throw InvalidArgument("http oracle needs host:port");
    cfg.target = "http://" + std::string(rest);
  } else {
    throw InvalidArgument("unknown oracle '" + std::string(spec) +
                          "' (expected simulated, cmd:<argv> or http:<url>)");
  }
  cfg.validate();
  return cfg;
}

Prediction CountingOracle::score(const ScoreRequest& request) {
  ++calls_;
  return inner_.score(request);
}

std::vector<Prediction> CountingOracle::score_batch(
    std::span<const ScoreRequest> requests) {
  calls_ += requests.size();
  return inner_.score_batch(requests);
}

std::string CountingOracle::describe() const {
  return "counting(" + inner_.describe() + ")";
}

std::vector<Prediction> score_all(Oracle& oracle,
                                  std::span<const ScoreRequest> requests,
                                  std::size_t batch_size,
                                  std::size_t concurrency) {
  batch_size = std::max<std::size_t>(batch_size, 1);
  concurrency = std::max<std::size_t>(concurrency, 1);
  std::vector<Prediction> out(requests.size());
  const std::size_t chunks = (requests.size() + batch_size - 1) / batch_size;

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * batch_size;
    const std::size_t n = std::min(batch_size, requests.size() - begin);
    auto preds = oracle.score_batch(requests.subspan(begin, n));
    if (preds.size() != n) {
      throw MalformedResponse("oracle returned " + std::to_string(preds.size()) +
                              " predictions for " + std::to_string(n) +
                              " requests");
    }
    std::copy(preds.begin(), preds.end(), out.begin() + begin);
  };

  if (concurrency == 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return out;
  }

  // Waves of at most `concurrency` chunks. Every future is drained before the
  // first error is rethrown so no task outlives `out`.
  for (std::size_t first = 0; first < chunks; first += concurrency) {
    const std::size_t last = std::min(chunks, first + concurrency);
    std::vector<std::future<void>> wave;
    for (std::size_t c = first; c < last; ++c) {
      wave.push_back(std::async(std::launch::async, run_chunk, c));
    }
    std::exception_ptr error;
    for (auto& f : wave) {
      try {
        f.get();
      } catch (...) {
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  }
  return out;
}

}  // namespace oseql
