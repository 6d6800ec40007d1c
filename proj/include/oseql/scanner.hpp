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

// End-to-end occlusion scan of one input: base score, one score per occluded
// line, outlier detection, class-flip filter, furthest-score selection and the
// optional brace filter.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oseql/occlusion.hpp"
#include "oseql/oracle.hpp"
#include "oseql/outliers.hpp"
#include "oseql/selection.hpp"

namespace oseql {

// Inputs with fewer non-blank lines are scanned but flagged low-confidence.
inline constexpr std::size_t kMinConfidentLines = 4;

struct ScanConfig {
  OracleConfig oracle;
  DetectorConfig detector;
  bool icbt = false;
  std::size_t concurrency = 1;
  // Re-score the input without the selected line and drop the candidate if
  // the class does not flip. Runs before the brace filter, so it costs at
  // most one oracle call per scan.
  bool verify_candidate = true;

  void validate() const;
};

struct VariantScore {
  std::size_t line_index = 0;
  Origin origin = Origin::A;
  std::size_t origin_index = 0;
  std::string text;
  Prediction prediction;
  bool outlier = false;
  bool flips_class = false;
};

struct ScanReport {
  std::string id;
  TaskKind task = TaskKind::Single;
  Prediction base;
  std::vector<VariantScore> variants;
  OutlierSet outliers;
  OutlierSet filtered;
  ScanVerdict verdict;
  bool low_confidence_degenerate = false;
  std::optional<Prediction> recheck;
  bool recheck_failed = false;
  std::size_t oracle_calls = 0;
  double seconds = 0.0;

  // Candidate before the brace filter, if any.
  const CandidateTrigger* raw_candidate() const;

  // The verdict this scan would have produced with the brace filter set to
  // `icbt`.
  ScanVerdict verdict_with(bool icbt) const;
};

ScanReport scan_one(const CodeInput& input, const ScanConfig& cfg,
                    Oracle& oracle);

// Full report as JSON. Without timing the output depends only on the input,
// the config and the oracle.
nlohmann::json to_json(const ScanReport& report, bool include_timing = true);

// Human-readable verdict and per-line score table.
std::string render_text(const ScanReport& report);

}  // namespace oseql
