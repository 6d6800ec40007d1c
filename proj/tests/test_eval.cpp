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

#include <doctest.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "oseql/error.hpp"
#include "oseql/eval.hpp"
#include "sim_corpus.hpp"
#include "support.hpp"

using namespace oseql;

namespace {

struct RefRow {
  const char* task;
  const char* model;
  const char* method;
  bool icbt;
  std::size_t P, N, TP, FN, FP, TN;
  double precision, accuracy, recall, f1;
  std::size_t cb_poisoned, cb_clean, cir_num, cir_den;
  double cir;
};

const RefRow kRows[] = {
#include "data/reference_rows.inc"
};

Tallies tallies_of(const RefRow& r) {
  Tallies t;
  t.tp = r.TP;
  t.fn = r.FN;
  t.fp = r.FP;
  t.tn = r.TN;
  t.correct = r.cir_num;
  t.cb_poisoned = r.cb_poisoned;
  t.cb_clean = r.cb_clean;
  return t;
}

// Accuracy cells whose exact value is a .xx5 tie printed rounded down.
bool printed_tie(const RefRow& r) {
  const std::string key = std::string(r.task) + "/" + r.model + "/" + r.method;
  return key == "clone/CodeBERT/ee" || (key == "clone/CodeT5/all" && !r.icbt);
}

CorpusSample make_sample(bool poisoned, std::size_t trigger_line = 3) {
  CorpusSample s;
  s.id = "s";
  s.input = CodeInput::single("a;\nb;\nc;\nd;", "s");
  s.poisoned = poisoned;
  s.label = poisoned ? 0 : 1;
  if (poisoned) s.trigger_line = trigger_line;
  return s;
}

ScanVerdict found_at(std::size_t line) {
  ScanVerdict v;
  CandidateTrigger c;
  c.line_index = line;
  v.trigger = c;
  return v;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("verdict classification") {
  CHECK(classify_verdict(make_sample(true), found_at(3)).outcome == Outcome::TP);
  CHECK(classify_verdict(make_sample(true), found_at(3)).correct_identification);
  CHECK(classify_verdict(make_sample(true), found_at(2)).outcome == Outcome::TP);
  CHECK_FALSE(classify_verdict(make_sample(true), found_at(2)).correct_identification);
  CHECK(classify_verdict(make_sample(true), ScanVerdict{}).outcome == Outcome::FN);
  CHECK(classify_verdict(make_sample(false), found_at(1)).outcome == Outcome::FP);
  CHECK_FALSE(classify_verdict(make_sample(false), found_at(1)).correct_identification);
  CHECK(classify_verdict(make_sample(false), ScanVerdict{}).outcome == Outcome::TN);
  CHECK(to_string(Outcome::FN) == "FN");
}

TEST_CASE("half-up rounding") {
  CHECK(round_half_up(0.615, 2) == 0.62);
  CHECK(round_half_up(0.625, 2) == 0.63);
  CHECK(round_half_up(2.675, 2) == 2.68);
  CHECK(round_half_up(0.6149, 2) == 0.61);
  CHECK(round_half_up(99.77375565610859, 2) == 99.77);
  CHECK(round_half_up(1.0, 2) == 1.0);
  CHECK(round_half_up(0.0, 2) == 0.0);
}

TEST_CASE("first reference row") {
  const auto m = compute_metrics(tallies_of(kRows[0]));
  CHECK(m.P == 442);
  CHECK(m.N == 448);
  CHECK(m.precision == doctest::Approx(441.0 / 707));
  CHECK(round_half_up(m.precision, 2) == 0.62);
  CHECK(round_half_up(m.accuracy, 2) == 0.70);
  CHECK(round_half_up(m.recall, 2) == 1.00);
  CHECK(round_half_up(m.f1, 2) == 0.77);
  CHECK(round_half_up(m.cir(), 2) == 99.77);
  const auto row = table_row("iqr", m);
  CHECK(row.find("441/442 (99.77%)") != std::string::npos);
  CHECK(row.find(" 0.62  0.70  1.00  0.77") != std::string::npos);
}

TEST_CASE("every reference row reproduces its printed metrics") {
  for (const auto& r : kRows) {
    CAPTURE(r.task);
    CAPTURE(r.model);
    CAPTURE(r.method);
    CAPTURE(r.icbt);
    const auto m = compute_metrics(tallies_of(r));
    CHECK(m.P == r.P);
    CHECK(m.N == r.N);
    CHECK(round_half_up(m.precision, 2) == r.precision);
    CHECK(round_half_up(m.recall, 2) == r.recall);
    CHECK(round_half_up(m.f1, 2) == r.f1);
    CHECK(round_half_up(m.cir(), 2) == r.cir);
    if (printed_tie(r)) {
      CHECK(round_half_up(m.accuracy, 2) == doctest::Approx(r.accuracy + 0.01));
    } else {
      CHECK(round_half_up(m.accuracy, 2) == r.accuracy);
    }
  }
}

TEST_CASE("brace bait accounts for the whole false-positive drop") {
  for (std::size_t i = 0; i + 1 < std::size(kRows); i += 2) {
    const auto& plain = kRows[i];
    const auto& icbt = kRows[i + 1];
    REQUIRE_FALSE(plain.icbt);
    REQUIRE(icbt.icbt);
    CAPTURE(plain.model);
    CAPTURE(plain.method);
    CHECK(plain.FP - icbt.FP == plain.cb_clean);
    CHECK(plain.TP - icbt.TP == plain.cb_poisoned);
  }
}

TEST_CASE("summaries per task and model") {
  std::map<std::string, std::vector<EvalMetrics>> groups;
  for (const auto& r : kRows) {
    groups[std::string(r.task) + "/" + r.model].push_back(compute_metrics(tallies_of(r)));
  }
  const std::map<std::string, std::pair<double, double>> expected = {
      {"defect/CodeBERT", {0.80, 100.0}}, {"defect/CodeT5", {0.78, 96.10}},
      {"defect/PLBART", {0.79, 100.0}},   {"defect/RoBERTa", {0.76, 99.52}},
      {"defect/BART", {0.76, 94.91}},     {"clone/CodeBERT", {0.71, 100.0}},
      {"clone/CodeT5", {0.72, 100.0}},    {"clone/PLBART", {0.76, 100.0}},
      {"clone/BART", {0.68, 99.40}},
  };
  REQUIRE(groups.size() == expected.size());
  for (const auto& [key, want] : expected) {
    CAPTURE(key);
    REQUIRE(groups.at(key).size() == 8);
    const auto s = summarize(groups.at(key));
    CHECK(round_half_up(s.avg_f1, 2) == want.first);
    CHECK(round_half_up(s.best_cir, 2) == want.second);
  }
  CHECK_THROWS_AS(summarize(std::vector<EvalMetrics>{}), InvalidArgument);
}

TEST_CASE("guarded divisions") {
  Tallies clean_only;
  clean_only.tn = 5;
  auto m = compute_metrics(clean_only);
  CHECK(m.precision == 0.0);
  CHECK(m.recall == 0.0);
  CHECK(m.f1 == 0.0);
  CHECK(m.accuracy == 1.0);
  CHECK(m.cir() == 0.0);

  Tallies missed;
  missed.fn = 3;
  m = compute_metrics(missed);
  CHECK(m.f1 == 0.0);
  CHECK(m.accuracy == 0.0);

  CHECK_THROWS_AS(compute_metrics(Tallies{}), InvalidArgument);
  testing::FnOracle any([](const ScoreRequest&) { return 0.5; });
  CHECK_THROWS_AS(run_eval(EvalCorpus{}, any, EvalOptions{}), InvalidArgument);
}

TEST_CASE("oracle failures are excluded and counted") {
  SimulatedOracle sim(testing::sim_params());
  const auto corpus = testing::curated_corpus(sim, TaskKind::Single, 60, 0.3, 5);
  REQUIRE(corpus.samples.size() >= 10);
  const std::string dead_a = corpus.samples[1].id;
  const std::string dead_b = corpus.samples[4].id;
  testing::FnOracle flaky([&](const ScoreRequest& r) {
    const auto stem = r.id.substr(0, r.id.find('#'));
    if (stem == dead_a) throw OracleUnavailable("gone");
    if (stem == dead_b) throw MalformedResponse("bad");
    return sim.score(r).score();
  });
  EvalOptions o;
  o.workers = 3;
  const auto run = run_eval(corpus, flaky, o);
  CHECK(run.excluded == 2);
  CHECK_FALSE(run.samples[1].report);
  CHECK(run.samples[1].error == "gone");
  const auto t = tally(corpus, run, false);
  CHECK(t.excluded == 2);
  const auto m = compute_metrics(t);
  CHECK(m.P + m.N == corpus.samples.size() - 2);
  CHECK(sample_report(run.samples[1], false)["verdict"] == "error");

  testing::FnOracle broken([](const ScoreRequest&) -> double {
    throw std::logic_error("bug");
  });
  CHECK_THROWS_AS(run_eval(corpus, broken, o), std::logic_error);
}

TEST_CASE("brace filter moves exactly the brace candidates") {
  SimulatedOracle sim(testing::sim_params(true, 3));
  const auto corpus = testing::curated_corpus(sim, TaskKind::Single, 200, 0.4, 8);
  EvalOptions o;
  o.workers = 4;
  const auto run = run_eval(corpus, sim, o);
  const auto plain = tally(corpus, run, false);
  const auto icbt = tally(corpus, run, true);
  CHECK(plain.cb_clean > 0);
  CHECK(plain.fp - icbt.fp == plain.cb_clean);
  CHECK(plain.tp - icbt.tp == plain.cb_poisoned);
  CHECK(icbt.tp == plain.tp);
  for (const auto& r : run.samples) {
    REQUIRE(r.report);
    if (r.report->verdict_with(true).found()) CHECK(r.report->verdict_with(false).found());
  }
}

TEST_CASE("summary output is deterministic across worker counts") {
  SimulatedOracle sim(testing::sim_params(true, 1));
  const auto corpus = testing::curated_corpus(sim, TaskKind::Paired, 80, 0.3, 2, Origin::B);
  std::string first;
  for (std::size_t workers : {1, 2, 5}) {
    EvalOptions o;
    o.workers = workers;
    o.scan.detector.method = OutlierMethod::Ensemble;
    const auto run = run_eval(corpus, sim, o);
    std::string text;
    for (bool icbt : {false, true}) {
      text += summary_json(compute_metrics(tally(corpus, run, icbt)),
                           OutlierMethod::Ensemble, icbt)
                  .dump();
    }
    if (first.empty()) first = text;
    CHECK(text == first);
  }
  CHECK(first.find("\"seconds\"") == std::string::npos);
}

}  // TEST_SUITE
