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

#include "oseql/scanner.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <type_traits>
#include <variant>

#include "oseql/error.hpp"

namespace oseql {

void ScanConfig::validate() const {
  oracle.validate();
  if (!(detector.iqr.k > 0)) throw InvalidArgument("iqr k must be > 0");
  if (detector.iforest.trees < 1) throw InvalidArgument("ifa trees must be >= 1");
  if (detector.iforest.subsample == 1) {
    throw InvalidArgument("ifa subsample must be 0 (auto) or >= 2");
  }
  if (!(detector.iforest.threshold > 0 && detector.iforest.threshold < 1)) {
    throw InvalidArgument("ifa threshold must be in (0,1)");
  }
  if (!(detector.elliptic.support_fraction > 0 &&
        detector.elliptic.support_fraction <= 1)) {
    throw InvalidArgument("eea support fraction must be in (0,1]");
  }
  if (!(detector.elliptic.quantile > 0 && detector.elliptic.quantile < 1)) {
    throw InvalidArgument("eea quantile must be in (0,1)");
  }
  if (concurrency < 1) throw InvalidArgument("concurrency must be >= 1");
}

const CandidateTrigger* ScanReport::raw_candidate() const {
  if (verdict.trigger) return &*verdict.trigger;
  if (verdict.suppressed_brace_candidate) {
    return &*verdict.suppressed_brace_candidate;
  }
  return nullptr;
}

ScanVerdict ScanReport::verdict_with(bool icbt) const {
  std::optional<CandidateTrigger> raw;
  if (const auto* c = raw_candidate()) raw = *c;
  ScanVerdict v = apply_icbt(std::move(raw), icbt);
  v.degenerate = verdict.degenerate;
  return v;
}

ScanReport scan_one(const CodeInput& input, const ScanConfig& cfg,
                    Oracle& oracle) {
  const auto started = std::chrono::steady_clock::now();
  const LineSet lines = extract_lines(input);
  const std::string id = input.id.empty() ? "input" : input.id;

  ScanReport report;
  report.id = id;
  report.task = input.task;
  report.low_confidence_degenerate = lines.size() < kMinConfidentLines;

  // Request 0 is the unmodified (normalized) input, request i omits line i.
  std::vector<ScoreRequest> requests;
  requests.reserve(lines.size() + 1);
  requests.push_back(ScoreRequest::from(reconstruct(lines, 0), input.task, id));
  for (const auto& v : generate_variants(lines)) {
    requests.push_back(ScoreRequest::from(
        v, input.task, id + "#L" + std::to_string(v.omitted_line_index)));
  }
  const auto predictions =
      score_all(oracle, requests, cfg.oracle.batch_size, cfg.concurrency);
  report.oracle_calls = requests.size();
  report.base = predictions.front();

  std::vector<ScorePoint> points;
  points.reserve(lines.size());
  for (const Line& line : lines.lines()) {
    const Prediction& p = predictions[line.index];
    points.push_back({line.index, p.score(), p.class_label()});
    report.variants.push_back({line.index, line.origin, line.origin_index,
                               line.text, p, false,
                               p.class_label() != report.base.class_label()});
  }

  report.outliers = detect_outliers(points, cfg.detector);
  for (const auto& p : report.outliers.flagged) {
    report.variants[p.line_index - 1].outlier = true;
  }
  report.filtered = filter_class_flip(report.outliers, report.base);
  auto candidate = select_candidate(report.filtered, report.base, lines);

  if (cfg.verify_candidate && candidate) {
    const auto without = reconstruct(lines, candidate->line_index);
    report.recheck = oracle.score(
        ScoreRequest::from(without, input.task, id + "#recheck"));
    ++report.oracle_calls;
    if (report.recheck->class_label() == report.base.class_label()) {
      report.recheck_failed = true;
      candidate.reset();
    }
  }
  report.verdict = apply_icbt(std::move(candidate), cfg.icbt);
  report.verdict.degenerate = report.low_confidence_degenerate;

  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return report;
}

namespace {

nlohmann::json candidate_json(const CandidateTrigger& c) {
  return {{"line", c.line_index},
          {"line_text", c.line_text},
          {"origin", std::string(to_string(c.origin))},
          {"origin_line", c.origin_index},
          {"score", c.variant_score},
          {"class", c.variant_class},
          {"score_delta", c.score_delta}};
}

nlohmann::json diagnostics_json(const OutlierSet& set) {
  return std::visit(
      [](const auto& d) -> nlohmann::json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, IqrDiagnostics>) {
          return {{"q1", d.q1},
                  {"q3", d.q3},
                  {"lower_fence", d.lower_fence},
                  {"upper_fence", d.upper_fence}};
        } else if constexpr (std::is_same_v<T, IforestDiagnostics>) {
          return {{"anomaly_scores", d.anomaly_scores},
                  {"subsample", d.subsample},
                  {"threshold", d.threshold}};
        } else if constexpr (std::is_same_v<T, EllipticDiagnostics>) {
          return {{"support", d.support},
                  {"location", d.location},
                  {"raw_variance", d.raw_variance},
                  {"consistency", d.consistency},
                  {"scale", d.scale},
                  {"threshold", d.threshold}};
        } else if constexpr (std::is_same_v<T, EnsembleDiagnostics>) {
          nlohmann::json votes = nlohmann::json::array();
          for (const auto& v : d.votes) votes.push_back({v[0], v[1], v[2]});
          return {{"votes", votes}};
        } else {
          return nullptr;
        }
      },
      set.diagnostics);
}

}  // namespace

nlohmann::json to_json(const ScanReport& r, bool include_timing) {
  nlohmann::json variants = nlohmann::json::array();
  for (const auto& v : r.variants) {
    variants.push_back({{"line", v.line_index},
                        {"origin", std::string(to_string(v.origin))},
                        {"origin_line", v.origin_index},
                        {"text", v.text},
                        {"score", v.prediction.score()},
                        {"class", v.prediction.class_label()},
                        {"outlier", v.outlier},
                        {"flips_class", v.flips_class}});
  }
  nlohmann::json j = {
      {"id", r.id},
      {"task", std::string(to_string(r.task))},
      {"verdict", r.verdict.found() ? "found" : "not_found"},
      {"method", std::string(to_string(r.outliers.method))},
      {"icbt", r.verdict.icbt_applied},
      {"low_confidence_degenerate", r.low_confidence_degenerate},
      {"base", {{"score", r.base.score()}, {"class", r.base.class_label()}}},
      {"variants", variants},
      {"outlier_diagnostics", diagnostics_json(r.outliers)},
      {"candidate", r.verdict.trigger ? candidate_json(*r.verdict.trigger)
                                      : nlohmann::json(nullptr)},
      {"suppressed_brace_candidate",
       r.verdict.suppressed_brace_candidate
           ? candidate_json(*r.verdict.suppressed_brace_candidate)
           : nlohmann::json(nullptr)},
      {"recheck_failed", r.recheck_failed},
      {"oracle_calls", r.oracle_calls}};
  if (include_timing) j["seconds"] = r.seconds;
  return j;
}

std::string render_text(const ScanReport& r) {
  std::ostringstream out;
  char buf[64];
  out << "id: " << r.id << "  task: " << to_string(r.task)
      << "  method: " << to_string(r.outliers.method)
      << (r.verdict.icbt_applied ? " +icbt" : "") << "\n";
  std::snprintf(buf, sizeof buf, "%.6f", r.base.score());
  out << "base prediction: class " << r.base.class_label() << ", score "
      << buf << "\n";
  if (r.verdict.trigger) {
    const auto& c = *r.verdict.trigger;
    out << "verdict: TRIGGER FOUND at line " << c.line_index;
    if (r.task == TaskKind::Paired) {
      out << " (snippet " << to_string(c.origin) << ", line " << c.origin_index
          << ")";
    }
    out << ": " << trim(c.line_text) << "\n";
  } else {
    out << "verdict: not found\n";
  }
  if (r.verdict.suppressed_brace_candidate) {
    out << "suppressed brace-only candidate at line "
        << r.verdict.suppressed_brace_candidate->line_index << "\n";
  }
  if (r.recheck_failed) out << "note: candidate failed the class-flip recheck\n";
  if (r.low_confidence_degenerate) {
    out << "note: fewer than " << kMinConfidentLines
        << " non-blank lines; low confidence\n";
  }
  out << "\n line  src   score     class  flag  text\n";
  for (const auto& v : r.variants) {
    std::snprintf(buf, sizeof buf, "%5zu  %s:%-3zu %.6f  %d      %s", v.line_index,
                  std::string(to_string(v.origin)).c_str(), v.origin_index,
                  v.prediction.score(), v.prediction.class_label(),
                  v.outlier ? (v.flips_class ? "*" : "o") : " ");
    out << buf << "     " << v.text << "\n";
  }
  return out.str();
}

}  // namespace oseql
