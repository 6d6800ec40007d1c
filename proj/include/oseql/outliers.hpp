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

// One-dimensional outlier detection over per-line occlusion scores.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace oseql {

enum class OutlierMethod { Iqr, IsolationForest, EllipticEnvelope, Ensemble };

// CLI / report names: iqr, iforest, ee, all.
std::string_view to_string(OutlierMethod method);
OutlierMethod parse_method(std::string_view text);

struct ScorePoint {
  std::size_t line_index = 0;
  double score = 0.0;
  int class_label = 0;

  bool operator==(const ScorePoint&) const = default;
};

struct IqrConfig {
  double k = 1.5;
};

struct IforestConfig {
  std::size_t trees = 100;
  std::size_t subsample = 0;  // 0 means min(256, n)
  double threshold = 0.6;
};

struct EllipticConfig {
  double support_fraction = 0.5;
  double quantile = 0.975;
};

struct IqrDiagnostics {
  double q1 = 0, q3 = 0, lower_fence = 0, upper_fence = 0;
};

struct IforestDiagnostics {
  std::vector<double> anomaly_scores;  // aligned with the input points
  std::size_t subsample = 0;
  double threshold = 0;
};

struct EllipticDiagnostics {
  std::size_t support = 0;       // h
  std::size_t window_start = 0;  // index into the sorted scores
  double location = 0;
  double raw_variance = 0;
  double consistency = 1;
  double scale = 0;              // raw_variance * consistency
  double threshold = 0;          // chi-square(1) quantile
};

struct EnsembleDiagnostics {
  // votes[i] = {iqr, iforest, ee} for input point i.
  std::vector<std::array<bool, 3>> votes;
};

using OutlierDiagnostics =
    std::variant<std::monostate, IqrDiagnostics, IforestDiagnostics,
                 EllipticDiagnostics, EnsembleDiagnostics>;

struct OutlierSet {
  OutlierMethod method = OutlierMethod::Iqr;
  std::vector<ScorePoint> flagged;  // subset of the input, in input order
  bool degenerate = false;          // the detector could not discriminate
  OutlierDiagnostics diagnostics;
};

// Quartiles by linear interpolation at 0.25(n-1) and 0.75(n-1); flags points
// outside [Q1 - k IQR, Q3 + k IQR]. Requires at least one point.
OutlierSet iqr_outliers(std::span<const ScorePoint> points,
                        const IqrConfig& cfg = {});

// Isolation forest on the scalar scores. Requires at least two points;
// identical scores give an empty, degenerate result.
OutlierSet iforest_outliers(std::span<const ScorePoint> points,
                            const IforestConfig& cfg, std::uint64_t seed);

// Exact 1-D minimum covariance determinant over sorted windows of
// h = ceil((n+1) * support_fraction) points, then a chi-square(1) cut on the
// squared standardized distance. Requires at least four points.
OutlierSet elliptic_outliers(std::span<const ScorePoint> points,
                             const EllipticConfig& cfg = {});

// 2-of-3 majority over the three detectors. Requires at least four points.
OutlierSet ensemble_outliers(std::span<const ScorePoint> points,
                             std::uint64_t seed, const IqrConfig& iqr = {},
                             const IforestConfig& iforest = {},
                             const EllipticConfig& elliptic = {});

struct DetectorConfig {
  OutlierMethod method = OutlierMethod::Iqr;
  IqrConfig iqr;
  IforestConfig iforest;
  EllipticConfig elliptic;
  std::uint64_t seed = 0;
};

// Total version used by the scanner: a detector whose size precondition is
// not met contributes an empty, degenerate result instead of throwing.
OutlierSet detect_outliers(std::span<const ScorePoint> points,
                           const DetectorConfig& cfg);

// Average path length of an unsuccessful BST search over n points; the
// isolation forest normalizer. c(0) = c(1) = 0, c(2) = 1.
double average_path_length(std::size_t n);

}  // namespace oseql
