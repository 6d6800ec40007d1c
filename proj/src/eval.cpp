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

#include "oseql/eval.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "oseql/error.hpp"

namespace oseql {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::TP: return "TP";
    case Outcome::FN: return "FN";
    case Outcome::FP: return "FP";
    case Outcome::TN: return "TN";
  }
  return "?";
}

Classification classify_verdict(const CorpusSample& sample,
                                const ScanVerdict& verdict) {
  Classification c;
  if (sample.poisoned) {
    c.outcome = verdict.found() ? Outcome::TP : Outcome::FN;
    c.correct_identification = verdict.found() && sample.trigger_line &&
                               verdict.trigger->line_index == *sample.trigger_line;
  } else {
    c.outcome = verdict.found() ? Outcome::FP : Outcome::TN;
  }
  return c;
}

void Tallies::add(const Classification& c) {
  switch (c.outcome) {
    case Outcome::TP: ++tp; break;
    case Outcome::FN: ++fn; break;
    case Outcome::FP: ++fp; break;
    case Outcome::TN: ++tn; break;
  }
  if (c.correct_identification) ++correct;
}

Tallies& Tallies::operator+=(const Tallies& o) {
  tp += o.tp;
  fn += o.fn;
  fp += o.fp;
  tn += o.tn;
  correct += o.correct;
  cb_poisoned += o.cb_poisoned;
  cb_clean += o.cb_clean;
  excluded += o.excluded;
  seconds += o.seconds;
  return *this;
}

double EvalMetrics::cir() const {
  return cir_denominator == 0 ? 0.0
                              : 100.0 * static_cast<double>(cir_numerator) /
                                    static_cast<double>(cir_denominator);
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalMetrics compute_metrics(const Tallies& t) {
  EvalMetrics m;
  m.TP = t.tp;
  m.FN = t.fn;
  m.FP = t.fp;
  m.TN = t.tn;
  m.P = t.tp + t.fn;
  m.N = t.fp + t.tn;
  if (m.P + m.N == 0) throw InvalidArgument("no scanned samples to score");
  m.precision = ratio(m.TP, m.TP + m.FP);
  m.recall = ratio(m.TP, m.P);
  m.accuracy = ratio(m.TP + m.TN, m.P + m.N);
  m.f1 = m.precision + m.recall == 0
             ? 0.0
             : 2 * m.precision * m.recall / (m.precision + m.recall);
  m.cir_numerator = t.correct;
  m.cir_denominator = m.P;
  m.cb_poisoned = t.cb_poisoned;
  m.cb_clean = t.cb_clean;
  m.excluded = t.excluded;
  m.mean_scan_seconds = t.seconds / static_cast<double>(m.P + m.N);
  return m;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = std::round(value * scale * 1e6) / 1e6;
  return std::floor(scaled + 0.5) / scale;
}

EvalRun run_eval(const EvalCorpus& corpus, Oracle& oracle,
                 const EvalOptions& options) {
  if (corpus.samples.empty()) throw InvalidArgument("empty evaluation corpus");
  options.scan.validate();
  if (options.workers < 1) throw InvalidArgument("workers must be >= 1");

  ScanConfig scan = options.scan;
  scan.icbt = false;

  EvalRun run;
  run.samples.resize(corpus.samples.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= corpus.samples.size()) return;
      const CorpusSample& s = corpus.samples[i];
      SampleResult& r = run.samples[i];
      r.id = s.id;
      r.poisoned = s.poisoned;
      try {
        CodeInput input = s.input;
        input.id = s.id;
        r.report = scan_one(input, scan, oracle);
      } catch (const OracleUnavailable& e) {
        r.error = e.what();
      } catch (const MalformedResponse& e) {
        r.error = e.what();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = corpus.samples.size();
        return;
      }
    }
  };

  const std::size_t n = std::min(options.workers, corpus.samples.size());
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t k = 0; k < n; ++k) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& r : run.samples) {
    if (!r.report) ++run.excluded;
  }
  return run;
}

Tallies tally(const EvalCorpus& corpus, const EvalRun& run, bool icbt) {
  if (corpus.samples.size() != run.samples.size()) {
    throw InvalidArgument("run does not match corpus");
  }
  Tallies t;
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    const auto& r = run.samples[i];
    if (!r.report) {
      ++t.excluded;
      continue;
    }
    const CorpusSample& s = corpus.samples[i];
    t.add(classify_verdict(s, r.report->verdict_with(icbt)));
    if (const auto* c = r.report->raw_candidate();
        c && is_curly_brace_line(c->line_text)) {
      ++(s.poisoned ? t.cb_poisoned : t.cb_clean);
    }
    t.seconds += r.report->seconds;
  }
  return t;
}

nlohmann::json sample_report(const SampleResult& r, bool icbt) {
  nlohmann::json j;
  j["id"] = r.id;
  if (!r.report) {
    j["verdict"] = "error";
    j["error"] = r.error;
    return j;
  }
  const ScanVerdict v = r.report->verdict_with(icbt);
  j["verdict"] = v.found() ? "found" : "not_found";
  j["line"] = v.found() ? nlohmann::json(v.trigger->line_index) : nullptr;
  j["line_text"] = v.found() ? nlohmann::json(v.trigger->line_text) : nullptr;
  j["method"] = std::string(to_string(r.report->outliers.method));
  j["icbt"] = icbt;
  j["score_delta"] = v.found() ? nlohmann::json(v.trigger->score_delta) : nullptr;
  j["seconds"] = r.report->seconds;
  return j;
}

nlohmann::json summary_json(const EvalMetrics& m, OutlierMethod method,
                            bool icbt) {
  return {{"method", std::string(to_string(method))},
          {"icbt", icbt},
          {"P", m.P},
          {"N", m.N},
          {"TP", m.TP},
          {"FN", m.FN},
          {"FP", m.FP},
          {"TN", m.TN},
          {"precision", m.precision},
          {"accuracy", m.accuracy},
          {"recall", m.recall},
          {"f1", m.f1},
          {"cir_numerator", m.cir_numerator},
          {"cir_denominator", m.cir_denominator},
          {"cb_poisoned", m.cb_poisoned},
          {"cb_clean", m.cb_clean},
          {"excluded", m.excluded}};
}

std::string table_header() {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%-18s %5s %5s %5s %5s %5s %5s %5s %5s %5s %5s %5s %5s  %s",
                "method", "P", "N", "TP", "FN", "FP", "TN", "prec", "acc",
                "rec", "f1", "cb_p", "cb_n", "CIR");
  return buf;
}

std::string table_row(const std::string& label, const EvalMetrics& m) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%-18s %5zu %5zu %5zu %5zu %5zu %5zu %5.2f %5.2f %5.2f %5.2f "
                "%5zu %5zu  %zu/%zu (%.2f%%)",
                label.c_str(), m.P, m.N, m.TP, m.FN, m.FP, m.TN,
                round_half_up(m.precision, 2), round_half_up(m.accuracy, 2),
                round_half_up(m.recall, 2), round_half_up(m.f1, 2),
                m.cb_poisoned, m.cb_clean, m.cir_numerator, m.cir_denominator,
                round_half_up(m.cir(), 2));
  return buf;
}

MethodSummary summarize(std::span<const EvalMetrics> rows) {
  if (rows.empty()) throw InvalidArgument("nothing to summarize");
  MethodSummary s;
  for (const auto& m : rows) {
    s.avg_f1 += m.f1;
    s.best_cir = std::max(s.best_cir, m.cir());
  }
  s.avg_f1 /= static_cast<double>(rows.size());
  return s;
}

}  // namespace oseql
