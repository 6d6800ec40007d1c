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

#include "oseql/selection.hpp"

#include <cmath>

namespace oseql {

OutlierSet filter_class_flip(const OutlierSet& outliers,
                             const Prediction& base) {
  OutlierSet out = outliers;
  std::erase_if(out.flagged, [&](const ScorePoint& p) {
    return p.class_label == base.class_label();
  });
  return out;
}

std::optional<ScorePoint> select_point(const OutlierSet& filtered,
                                       const Prediction& base) {
  std::optional<ScorePoint> best;
  double best_delta = -1.0;
  for (const ScorePoint& p : filtered.flagged) {
    const double delta = std::abs(base.score() - p.score);
    if (delta > best_delta ||
        (delta == best_delta && p.line_index < best->line_index)) {
      best = p;
      best_delta = delta;
    }
  }
  return best;
}

std::optional<CandidateTrigger> select_candidate(const OutlierSet& filtered,
                                                 const Prediction& base,
                                                 const LineSet& lines) {
  const auto point = select_point(filtered, base);
  if (!point) return std::nullopt;
  const Line& line = lines.at(point->line_index);
  CandidateTrigger c;
  c.line_index = line.index;
  c.line_text = line.text;
  c.origin = line.origin;
  c.origin_index = line.origin_index;
  c.method = filtered.method;
  c.variant_score = point->score;
  c.variant_class = point->class_label;
  c.score_delta = std::abs(base.score() - point->score);
  c.base_prediction = base;
  return c;
}

ScanVerdict apply_icbt(std::optional<CandidateTrigger> candidate,
                       bool enabled) {
  ScanVerdict v;
  v.icbt_applied = enabled;
  if (candidate && enabled && is_curly_brace_line(candidate->line_text)) {
    v.suppressed_brace_candidate = std::move(candidate);
    return v;
  }
  v.trigger = std::move(candidate);
  return v;
}

}  // namespace oseql
