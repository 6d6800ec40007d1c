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

// Narrowing outliers to a single candidate trigger line.

#include <optional>
#include <string>

#include "oseql/occlusion.hpp"
#include "oseql/oracle.hpp"
#include "oseql/outliers.hpp"

namespace oseql {

struct CandidateTrigger {
  std::size_t line_index = 0;
  std::string line_text;
  Origin origin = Origin::A;
  std::size_t origin_index = 0;
  OutlierMethod method = OutlierMethod::Iqr;
  double variant_score = 0.0;
  int variant_class = 0;
  double score_delta = 0.0;  // |base.score - variant_score|
  Prediction base_prediction;

  bool operator==(const CandidateTrigger&) const = default;
};

struct ScanVerdict {
  std::optional<CandidateTrigger> trigger;  // set iff a trigger was found
  bool degenerate = false;
  bool icbt_applied = false;
  std::optional<CandidateTrigger> suppressed_brace_candidate;

  bool found() const { return trigger.has_value(); }
};

// Drops flagged points whose class equals the base class: occluding a trigger
// must flip the prediction.
OutlierSet filter_class_flip(const OutlierSet& outliers, const Prediction& base);

// The point furthest from the base score; ties go to the smallest line index.
std::optional<ScorePoint> select_point(const OutlierSet& filtered,
                                       const Prediction& base);

std::optional<CandidateTrigger> select_candidate(const OutlierSet& filtered,
                                                 const Prediction& base,
                                                 const LineSet& lines);

// With `enabled`, a brace-only candidate is suppressed and the verdict becomes
// not-found, keeping the suppressed candidate for the report.
ScanVerdict apply_icbt(std::optional<CandidateTrigger> candidate, bool enabled);

}  // namespace oseql
