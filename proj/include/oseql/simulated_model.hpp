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

// A deterministic stand-in for a backdoored binary code classifier.
//
// Any input containing one of the trigger lines is pushed to the target class
// with high confidence. Other inputs get a content-derived score whose range
// depends on the clean label the corpus builder designated for the sample,
// plus bounded noise, so occluding an ordinary line moves the score only a
// little while occluding the trigger flips the class.

#include <cstdint>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oseql/oracle.hpp"

namespace oseql {

struct ScoreRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct SimulatedModelParams {
  std::vector<std::string> trigger_patterns;
  int target_class = 0;
  double trigger_confidence = 0.02;
  double noise_amplitude = 0.05;
  std::uint64_t seed = 0;
  ScoreRange label1_range{0.55, 0.95};
  ScoreRange label0_range{0.05, 0.45};
  // When set, clean inputs with unbalanced curly braces get their score
  // mirrored around 0.5, imitating a model confused by a syntax error.
  bool brace_sensitive = false;
};

class SimulatedPoisonedModel {
 public:
  explicit SimulatedPoisonedModel(SimulatedModelParams params);

  const SimulatedModelParams& params() const { return params_; }

  // Score for `code` scored as a sample whose clean label is `designation`.
  Prediction predict(std::string_view code, int designation) const;

  // True if some trimmed line of `code` equals a trigger pattern.
  bool contains_trigger(std::string_view code) const;

  // Base score before noise, in the designation's range.
  double clean_bias(std::string_view code, int designation) const;

 private:
  SimulatedModelParams params_;
  std::vector<std::string> triggers_;  // trimmed
};

// Oracle front-end for the simulated model. Samples are designated by id; a
// request id `sample#suffix` resolves to `sample`. Undesignated ids score as
// label 1.
class SimulatedOracle final : public Oracle {
 public:
  explicit SimulatedOracle(SimulatedModelParams params);

  void designate(const std::string& sample_id, int clean_label);
  void clear_designations();
  int designation_of(std::string_view request_id) const;

  Prediction score(const ScoreRequest& request) override;
  std::string describe() const override;

  const SimulatedPoisonedModel& model() const { return model_; }

  // Concatenation the model sees for a request: code_a, then code_b.
  static std::string joined_code(const ScoreRequest& request);

 private:
  SimulatedPoisonedModel model_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, int> designations_;
};

// simulated_predict: free-function form over a single code text.
Prediction simulated_predict(const SimulatedPoisonedModel& model,
                             std::string_view code, int designation = 1);

}  // namespace oseql
