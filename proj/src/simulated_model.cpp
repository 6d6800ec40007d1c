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

#include "oseql/simulated_model.hpp"

#include <algorithm>
#include <mutex>

#include "oseql/error.hpp"
#include "oseql/hashing.hpp"

namespace oseql {

namespace {

constexpr std::uint64_t kNoiseSalt = 0x6e6f697365ULL;    // "noise"

template <typename F>
void for_each_line(std::string_view code, F&& f) {
  std::size_t start = 0;
  while (start <= code.size()) {
    std::size_t end = code.find('\n', start);
    if (end == std::string_view::npos) end = code.size();
    std::string_view line = trim(code.substr(start, end - start));
    if (!line.empty()) f(line);
    start = end + 1;
  }
}

bool braces_balanced(std::string_view code) {
  return std::count(code.begin(), code.end(), '{') ==
         std::count(code.begin(), code.end(), '}');
}

}  // namespace

SimulatedPoisonedModel::SimulatedPoisonedModel(SimulatedModelParams params)
    : params_(std::move(params)) {
  if (params_.target_class != 0 && params_.target_class != 1) {
    throw InvalidArgument("target_class must be 0 or 1");
  }
  if (params_.trigger_confidence < 0.0 ||
      params_.trigger_confidence + params_.noise_amplitude / 10 >=
          kDecisionThreshold) {
    throw InvalidArgument("trigger_confidence must leave the score confidently"
                          " on the target side of 0.5");
  }
  if (params_.noise_amplitude < 0.0) {
    throw InvalidArgument("noise_amplitude must be >= 0");
  }
  for (const auto& t : params_.trigger_patterns) {
    auto trimmed = trim(t);
    if (!trimmed.empty()) triggers_.emplace_back(trimmed);
  }
}

bool SimulatedPoisonedModel::contains_trigger(std::string_view code) const {
  if (triggers_.empty()) return false;
  bool found = false;
  for_each_line(code, [&](std::string_view line) {
    if (!found) {
      found = std::find(triggers_.begin(), triggers_.end(), line) !=
              triggers_.end();
    }
  });
  return found;
}

double SimulatedPoisonedModel::clean_bias(std::string_view code,
                                          int designation) const {
  const ScoreRange range =
      designation == 1 ? params_.label1_range : params_.label0_range;
  double sum = 0.0;
  std::size_t n = 0;
  for_each_line(code, [&](std::string_view line) {
    sum += unit_interval(hash_with_seed(line, params_.seed));
    ++n;
  });
  const double mean = n == 0 ? 0.5 : sum / static_cast<double>(n);
  return range.lo + (range.hi - range.lo) * mean;
}

Prediction SimulatedPoisonedModel::predict(std::string_view code,
                                           int designation) const {
  const double u = unit_interval(hash_with_seed(code, params_.seed ^ kNoiseSalt));
  if (contains_trigger(code)) {
    const double confident =
        params_.trigger_confidence + u * params_.noise_amplitude / 10;
    return Prediction(params_.target_class == 0 ? confident : 1.0 - confident);
  }
  double s = clean_bias(code, designation) +
             (2.0 * u - 1.0) * params_.noise_amplitude;
  s = std::clamp(s, 0.0, 1.0);
  if (params_.brace_sensitive && !braces_balanced(code)) s = 1.0 - s;
  return Prediction(s);
}

Prediction simulated_predict(const SimulatedPoisonedModel& model,
                             std::string_view code, int designation) {
  return model.predict(code, designation);
}

SimulatedOracle::SimulatedOracle(SimulatedModelParams params)
    : model_(std::move(params)) {}

void SimulatedOracle::designate(const std::string& sample_id, int clean_label) {
  if (clean_label != 0 && clean_label != 1) {
    throw InvalidArgument("designation must be 0 or 1");
  }
  std::unique_lock lock(mutex_);
  designations_[sample_id] = clean_label;
}

void SimulatedOracle::clear_designations() {
  std::unique_lock lock(mutex_);
  designations_.clear();
}

int SimulatedOracle::designation_of(std::string_view request_id) const {
  const auto hash = request_id.find('#');
  const std::string sample(request_id.substr(0, hash));
  std::shared_lock lock(mutex_);
  const auto it = designations_.find(sample);
  return it == designations_.end() ? 1 : it->second;
}

std::string SimulatedOracle::joined_code(const ScoreRequest& request) {
  if (!request.code_b) return request.code_a;
  return request.code_a + "\n" + *request.code_b;
}

Prediction SimulatedOracle::score(const ScoreRequest& request) {
  return model_.predict(joined_code(request), designation_of(request.id));
}

std::string SimulatedOracle::describe() const {
  return "simulated(seed=" + std::to_string(model_.params().seed) +
         ", triggers=" +
         std::to_string(model_.params().trigger_patterns.size()) + ")";
}

}  // namespace oseql
