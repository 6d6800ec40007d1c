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

// oseql: scan code inputs for single-line backdoor triggers, build poisoned
// corpora and evaluate detection over them.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oseql/corpus_io.hpp"
#include "oseql/error.hpp"
#include "oseql/eval.hpp"
#include "oseql/poisoning.hpp"
#include "oseql/scanner.hpp"
#include "oseql/simulated_model.hpp"
#include "oseql/synth.hpp"
#include "oseql/transports.hpp"
#include "oseql/wire.hpp"

namespace {

using namespace oseql;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitOracle = 2;
constexpr int kExitInput = 3;

struct OracleFlags {
  std::string spec = "simulated";
  std::size_t batch_size = 32;
  long timeout_ms = 30000;
  int retries = 2;
  std::vector<std::string> triggers;
  bool brace_sensitive = false;

  void add_to(CLI::App* app) {
    app->add_option("--oracle", spec,
                    "simulated | cmd:<command line> | http:<url>")
        ->capture_default_str();
    app->add_option("--batch-size", batch_size, "Requests per oracle call")
        ->capture_default_str();
    app->add_option("--timeout-ms", timeout_ms, "Per-call timeout")
        ->capture_default_str();
    app->add_option("--retries", retries, "Retries on transport errors")
        ->capture_default_str();
    app->add_option("--sim-trigger", triggers,
                    "Trigger line known to the simulated model (repeatable; "
                    "defaults to the built-in set)");
    app->add_flag("--sim-brace-sensitive", brace_sensitive,
                  "Simulated model mis-scores inputs with unbalanced braces");
  }

  OracleConfig config() const {
    OracleConfig c = parse_oracle_spec(spec);
    c.batch_size = batch_size;
    c.timeout = std::chrono::milliseconds(timeout_ms);
    c.retry_count = retries;
    return c;
  }

  std::unique_ptr<Oracle> make(std::uint64_t seed) const {
    SimulatedModelParams p;
    p.trigger_patterns = triggers.empty() ? builtin_triggers() : triggers;
    p.seed = seed;
    p.brace_sensitive = brace_sensitive;
    return make_oracle(config(), p);
  }
};

struct DetectorFlags {
  std::string method = "iqr";
  bool icbt = false;
  double iqr_k = 1.5;
  std::size_t trees = 100;
  std::size_t subsample = 0;
  double ifa_threshold = 0.6;
  double support_fraction = 0.5;
  double quantile = 0.975;
  std::size_t concurrency = 1;
  bool no_recheck = false;

  void add_to(CLI::App* app) {
    app->add_option("--method", method, "iqr | iforest | ee | all")
        ->check(CLI::IsMember({"iqr", "iforest", "ee", "all"}))
        ->capture_default_str();
    app->add_flag("--icbt", icbt, "Ignore brace-only candidate triggers");
    app->add_option("--iqr-k", iqr_k, "IQR fence multiplier")
        ->capture_default_str();
    app->add_option("--ifa-trees", trees)->capture_default_str();
    app->add_option("--ifa-subsample", subsample, "0 = min(256, n)")
        ->capture_default_str();
    app->add_option("--ifa-threshold", ifa_threshold)->capture_default_str();
    app->add_option("--eea-support", support_fraction)->capture_default_str();
    app->add_option("--eea-quantile", quantile)->capture_default_str();
    app->add_option("--concurrency", concurrency,
                    "Oracle batches in flight per scan")
        ->capture_default_str();
    app->add_flag("--no-recheck", no_recheck,
                  "Skip the class-flip recheck of the selected line");
  }

  ScanConfig config(const OracleConfig& oracle, std::uint64_t seed) const {
    ScanConfig c;
    c.oracle = oracle;
    c.detector.method = parse_method(method);
    c.detector.iqr.k = iqr_k;
    c.detector.iforest.trees = trees;
    c.detector.iforest.subsample = subsample;
    c.detector.iforest.threshold = ifa_threshold;
    c.detector.elliptic.support_fraction = support_fraction;
    c.detector.elliptic.quantile = quantile;
    c.detector.seed = seed;
    c.icbt = icbt;
    c.concurrency = concurrency;
    c.verify_candidate = !no_recheck;
    c.validate();
    return c;
  }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("OSEQL_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("OSEQL_SEED is not an integer: ") + env);
  }
  return 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

// scan ----------------------------------------------------------------------

struct ScanCmd {
  OracleFlags oracle;
  DetectorFlags detector;
  std::optional<std::uint64_t> seed;
  std::string file, file_b, task, out, id;
  bool json = false;

  int run() const {
    const auto s = resolve_seed(seed);
    TaskKind kind = file_b.empty() ? TaskKind::Single : TaskKind::Paired;
    if (!task.empty()) kind = parse_task(task);
    if (kind == TaskKind::Paired && file_b.empty()) {
      throw InvalidArgument("--task pair needs --file-b");
    }
    if (kind == TaskKind::Single && !file_b.empty()) {
      throw InvalidArgument("--file-b given for a single-input task");
    }
    const std::string name = id.empty() ? "input" : id;
    CodeInput input = kind == TaskKind::Paired
                          ? CodeInput::paired(read_file(file), read_file(file_b), name)
                          : CodeInput::single(read_file(file), name);
    input.validate();

    const auto oc = oracle.config();
    const auto cfg = detector.config(oc, s);
    auto model = oracle.make(s);
    const ScanReport report = scan_one(input, cfg, *model);
    const std::string js = to_json(report, false).dump(2) + "\n";
    if (json) {
      std::cout << js;
    } else {
      std::cout << render_text(report);
    }
    if (!out.empty()) write_text(out, js);
    return kExitOk;
  }
};

// eval ----------------------------------------------------------------------

struct EvalCmd {
  OracleFlags oracle;
  DetectorFlags detector;
  std::optional<std::uint64_t> seed;
  std::string corpus, out, report;
  std::size_t workers = 1;
  bool no_curate = false;
  bool sweep = false;

  int run() const {
    const auto s = resolve_seed(seed);
    const auto samples = read_corpus_file(corpus);
    if (samples.empty()) throw InputError("corpus " + corpus + " is empty");

    const auto oc = oracle.config();
    auto model = oracle.make(s);
    if (auto* sim = dynamic_cast<SimulatedOracle*>(model.get())) {
      designate_clean_labels(*sim, samples);
    }

    EvalCorpus ec;
    if (no_curate) {
      ec.samples = samples;
      for (const auto& x : samples) ++(x.poisoned ? ec.poisoned : ec.clean);
    } else {
      ec = curate_trickers(samples, *model, oc.batch_size, detector.concurrency);
    }
    if (ec.samples.empty()) {
      throw InputError("no samples left after curation");
    }
    std::cerr << "corpus: P=" << ec.poisoned << " N=" << ec.clean << "\n";

    std::vector<std::string> methods = {detector.method};
    if (sweep) methods = {"iqr", "iforest", "ee", "all"};
    const bool both = detector.icbt || sweep;

    nlohmann::json rows = nlohmann::json::array();
    std::vector<EvalMetrics> all_rows;
    std::ofstream report_out;
    if (!report.empty()) {
      report_out.open(report);
      if (!report_out) throw InputError("cannot write " + report);
    }
    std::cout << table_header() << "\n";
    std::size_t excluded = 0;
    for (const auto& m : methods) {
      DetectorFlags d = detector;
      d.method = m;
      EvalOptions opts;
      opts.scan = d.config(oc, s);
      opts.workers = workers;
      const EvalRun run = run_eval(ec, *model, opts);
      excluded = std::max(excluded, run.excluded);
      for (bool icbt : both ? std::vector<bool>{false, true}
                            : std::vector<bool>{false}) {
        const EvalMetrics metrics = compute_metrics(tally(ec, run, icbt));
        const std::string label = "oseql-" + m + (icbt ? "+icbt" : "");
        std::cout << table_row(label, metrics) << "\n";
        rows.push_back(summary_json(metrics, opts.scan.detector.method, icbt));
        all_rows.push_back(metrics);
        if (report_out.is_open()) {
          for (const auto& r : run.samples) {
            report_out << wire::dump_line(sample_report(r, icbt)) << "\n";
          }
        }
      }
    }
    nlohmann::json summary = {{"corpus", {{"P", ec.poisoned}, {"N", ec.clean}}},
                              {"rows", rows}};
    if (sweep) {
      const auto agg = summarize(all_rows);
      std::printf("avg f1 %.2f  best CIR %.2f%%\n", round_half_up(agg.avg_f1, 2),
                  round_half_up(agg.best_cir, 2));
      summary["avg_f1"] = agg.avg_f1;
      summary["best_cir"] = agg.best_cir;
    }
    if (excluded) {
      std::cerr << "warning: " << excluded
                << " sample(s) excluded after oracle failures\n";
    }
    if (!out.empty()) write_text(out, summary.dump(2) + "\n");
    return kExitOk;
  }
};

// poison --------------------------------------------------------------------

struct PoisonCmd {
  std::optional<std::uint64_t> seed;
  std::string in, out, target = "a";
  std::string trigger = builtin_triggers().front();
  double rate = 0.03;

  int run() const {
    auto samples = read_corpus_file(in);
    PoisonOptions o;
    o.rate = rate;
    o.seed = resolve_seed(seed);
    o.target = target == "b" ? Origin::B : Origin::A;
    const auto poisoned = poison_corpus(samples, trigger, o);
    std::size_t count = 0;
    for (const auto& s : poisoned) count += s.poisoned;
    if (out.empty()) {
      write_corpus(std::cout, poisoned);
    } else {
      write_corpus_file(out, poisoned);
    }
    std::cerr << "poisoned " << count << " of " << poisoned.size()
              << " samples\n";
    return kExitOk;
  }
};

// synth ---------------------------------------------------------------------

struct SynthCmd {
  std::optional<std::uint64_t> seed;
  std::string out, task = "single";
  SynthOptions opts;

  int run() {
    opts.seed = resolve_seed(seed);
    opts.task = parse_task(task);
    const auto samples = synthesize_corpus(opts);
    if (out.empty()) {
      write_corpus(std::cout, samples);
    } else {
      write_corpus_file(out, samples);
    }
    return kExitOk;
  }
};

// oracle-check --------------------------------------------------------------

struct CheckCmd {
  OracleFlags oracle;
  std::optional<std::uint64_t> seed;

  int run() const {
    auto model = oracle.make(resolve_seed(seed));
    std::cout << "oracle: " << model->describe() << "\n";
    const std::vector<ScoreRequest> probes = {
        {"check-single", TaskKind::Single,
         "int add(int a, int b)\n{\n    return a + b;\n}", std::nullopt},
        {"check-pair", TaskKind::Paired, "int f() { return 1; }",
         std::string("int g() { return 1; }")},
        {"check-unicode", TaskKind::Single,
         "// caf\xc3\xa9 \"quoted\" \\ tab\t\nint x = 0;", std::nullopt},
    };
    std::vector<Prediction> singles;
    for (const auto& p : probes) {
      singles.push_back(model->score(p));
      std::printf("ok  single %-14s class %d score %.6f\n", p.id.c_str(),
                  singles.back().class_label(), singles.back().score());
    }
    const auto batch = model->score_batch(probes);
    if (batch.size() != probes.size()) {
      throw MalformedResponse("batch size mismatch");
    }
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (!(batch[i] == singles[i])) {
        throw MalformedResponse("batch score for " + probes[i].id +
                                " differs from single score");
      }
    }
    std::printf("ok  batch of %zu matches single calls\n", probes.size());
    if (!(model->score(probes[0]) == singles[0])) {
      throw MalformedResponse("repeated request scored differently");
    }
    std::printf("ok  repeated request is deterministic\n");
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occlusion-based trigger scanner for binary code classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "oseql 0.1.0");

  auto add_seed = [](CLI::App* sub, std::optional<std::uint64_t>& seed) {
    sub->add_option("--seed", seed, "RNG seed (falls back to $OSEQL_SEED, then 0)");
  };

  ScanCmd scan;
  auto* scan_app = app.add_subcommand("scan", "Scan one input for a trigger line");
  scan.oracle.add_to(scan_app);
  scan.detector.add_to(scan_app);
  add_seed(scan_app, scan.seed);
  scan_app->add_option("--file", scan.file, "Code file (first snippet)")
      ->required()
      ->check(CLI::ExistingFile);
  scan_app->add_option("--file-b", scan.file_b, "Second snippet for pair tasks")
      ->check(CLI::ExistingFile);
  scan_app->add_option("--task", scan.task, "single | pair")
      ->check(CLI::IsMember({"single", "pair"}));
  scan_app->add_option("--id", scan.id, "Request id prefix");
  scan_app->add_option("--out", scan.out, "Write the JSON report here");
  scan_app->add_flag("--json", scan.json, "Print the JSON report instead of text");

  EvalCmd eval;
  auto* eval_app = app.add_subcommand("eval", "Evaluate detection over a corpus");
  eval.oracle.add_to(eval_app);
  eval.detector.add_to(eval_app);
  add_seed(eval_app, eval.seed);
  eval_app->add_option("--corpus", eval.corpus, "JSON-lines corpus")
      ->required()
      ->check(CLI::ExistingFile);
  eval_app->add_option("--out", eval.out, "Write the summary JSON here");
  eval_app->add_option("--report", eval.report, "Write per-sample JSON lines here");
  eval_app->add_option("--workers", eval.workers, "Samples scanned in parallel")
      ->capture_default_str();
  eval_app->add_flag("--no-curate", eval.no_curate,
                     "Use the corpus as is instead of keeping model-tricking "
                     "samples only");
  eval_app->add_flag("--sweep", eval.sweep,
                     "Run every method with and without --icbt and summarize");

  PoisonCmd poison;
  auto* poison_app = app.add_subcommand("poison", "Insert triggers into a corpus");
  add_seed(poison_app, poison.seed);
  poison_app->add_option("--in", poison.in, "Clean JSON-lines corpus")
      ->required()
      ->check(CLI::ExistingFile);
  poison_app->add_option("--out", poison.out, "Output corpus (default stdout)");
  poison_app->add_option("--trigger", poison.trigger, "Dead-code trigger line")
      ->capture_default_str();
  poison_app->add_option("--rate", poison.rate, "Fraction of the corpus to poison")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  poison_app->add_option("--target", poison.target, "Snippet to poison in pairs")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();

  SynthCmd synth;
  auto* synth_app = app.add_subcommand("synth", "Generate a synthetic corpus");
  add_seed(synth_app, synth.seed);
  synth_app->add_option("--count", synth.opts.count)->capture_default_str();
  synth_app->add_option("--task", synth.task, "single | pair")
      ->check(CLI::IsMember({"single", "pair"}))
      ->capture_default_str();
  synth_app->add_option("--label1-fraction", synth.opts.label1_fraction)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth_app->add_option("--out", synth.out, "Output corpus (default stdout)");

  CheckCmd check;
  auto* check_app =
      app.add_subcommand("oracle-check", "Round-trip probe requests through an oracle");
  check.oracle.add_to(check_app);
  add_seed(check_app, check.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*scan_app) return scan.run();
    if (*eval_app) return eval.run();
    if (*poison_app) return poison.run();
    if (*synth_app) return synth.run();
    if (*check_app) return check.run();
  } catch (const OracleUnavailable& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return kExitOracle;
  } catch (const MalformedResponse& e) {
    std::cerr << "oracle failure: " << e.what() << "\n";
    return kExitOracle;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
