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

// Detection and identification metrics over an evaluation corpus.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "oseql/poisoning.hpp"
#include "oseql/scanner.hpp"

namespace oseql {

enum class Outcome { TP, FN, FP, TN };

std::string_view to_string(Outcome outcome);

struct Classification {
  Outcome outcome = Outcome::TN;
  bool correct_identification = false;
};

Classification classify_verdict(const CorpusSample& sample,
                                const ScanVerdict& verdict);

struct Tallies {
  std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
  std::size_t correct = 0;     // poisoned samples with the right line
  std::size_t cb_poisoned = 0;  // brace-only raw candidates
  std::size_t cb_clean = 0;
  std::size_t excluded = 0;  // oracle failures
  double seconds = 0.0;      // summed scan time

  void add(const Classification& c);
  Tallies& operator+=(const Tallies& other);
};

struct EvalMetrics {
  std::size_t P = 0, N = 0, TP = 0, FN = 0, FP = 0, TN = 0;
  double precision = 0, accuracy = 0, recall = 0, f1 = 0;
  std::size_t cir_numerator = 0, cir_denominator = 0;
  std::size_t cb_poisoned = 0, cb_clean = 0;
  std::size_t excluded = 0;
  double mean_scan_seconds = 0;

  double cir() const;  // percent, 0 when P == 0
};

// Throws InvalidArgument if the tallies cover no samples.
EvalMetrics compute_metrics(const Tallies& tallies);

// Half-up rounding to `decimals` places, as a printed table would show it.
// Ties are judged after snapping away binary noise.
double round_half_up(double value, int decimals);

struct SampleResult {
  std::string id;
  bool poisoned = false;
  std::optional<ScanReport> report;  // unset on oracle failure
  std::string error;
};

struct EvalOptions {
  ScanConfig scan;
  std::size_t workers = 1;  // samples scanned in parallel
};

struct EvalRun {
  std::vector<SampleResult> samples;  // corpus order
  std::size_t excluded = 0;
};

// Scans every sample. The brace filter is not applied here; pick it when
// tallying, so one pass yields both the plain and the filtered rows. Throws
// InvalidArgument on an empty corpus.
EvalRun run_eval(const EvalCorpus& corpus, Oracle& oracle,
                 const EvalOptions& options);

Tallies tally(const EvalCorpus& corpus, const EvalRun& run, bool icbt);

// Per-sample report line.
nlohmann::json sample_report(const SampleResult& result, bool icbt);

// Full-precision metrics, no timing, stable key order.
nlohmann::json summary_json(const EvalMetrics& metrics, OutlierMethod method,
                            bool icbt);

// One Table-2-style row: counts, rounded ratios and CIR.
std::string table_header();
std::string table_row(const std::string& label, const EvalMetrics& m);

struct MethodSummary {
  double avg_f1 = 0;    // over the rows given, before rounding
  double best_cir = 0;  // percent
};

MethodSummary summarize(std::span<const EvalMetrics> rows);

}  // namespace oseql
