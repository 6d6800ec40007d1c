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

#include "oseql/poisoning.hpp"

#include <algorithm>
#include <cmath>

#include "oseql/error.hpp"
#include "oseql/hashing.hpp"

namespace oseql {

TriggerSpec TriggerSpec::random_line(std::string text, std::uint64_t seed) {
  TriggerSpec s;
  s.text = std::move(text);
  s.policy = InsertionKind::RandomLine;
  s.seed = seed;
  return s;
}

TriggerSpec TriggerSpec::fixed(std::string text, std::size_t line) {
  TriggerSpec s;
  s.text = std::move(text);
  s.policy = InsertionKind::FixedLine;
  s.fixed_line = line;
  return s;
}

void TriggerSpec::validate() const {
  if (text.find_first_of("\r\n") != std::string::npos) {
    throw InvalidArgument("trigger must be a single line");
  }
  if (trim(text).empty()) throw InvalidArgument("trigger is blank");
  if (is_curly_brace_line(text)) {
    throw InvalidArgument("trigger must not be a brace-only line");
  }
  if (policy == InsertionKind::FixedLine && fixed_line < 1) {
    throw InvalidArgument("fixed trigger line is 1-based");
  }
}

const std::vector<std::string>& builtin_triggers() {
  static const std::vector<std::string> kTriggers = {
      "int capacity = 5333;",
      "int zoom_ratio;",
      "int buffer_margin = 4127;",
      "int retry_budget = 77;",
      "assert(1 == 1);",
      "assert(sizeof(int) > 0);",
  };
  return kTriggers;
}

void CorpusSample::validate() const {
  input.validate();
  if (label != 0 && label != 1) throw InputError("label must be 0 or 1");
  if (poisoned && !trigger_line) {
    throw InputError("poisoned sample " + id + " has no trigger line");
  }
  if (!poisoned && trigger_line) {
    throw InputError("clean sample " + id + " has a trigger line");
  }
  if (poisoned && label != 0) {
    throw InputError("poisoned sample " + id + " must carry label 0");
  }
}

namespace {

std::string leading_whitespace(const std::string& line) {
  const auto end = line.find_first_not_of(" \t");
  return line.substr(0, end == std::string::npos ? line.size() : end);
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

std::vector<std::string> texts_of(const LineSet& lines, Origin origin) {
  std::vector<std::string> out;
  for (const Line& l : lines.lines()) {
    if (l.origin == origin) out.push_back(l.text);
  }
  return out;
}

}  // namespace

CorpusSample insert_trigger(const CorpusSample& sample, const TriggerSpec& spec) {
  spec.validate();
  sample.validate();
  if (sample.poisoned) {
    throw InvalidArgument("sample " + sample.id + " is already poisoned");
  }
  if (sample.label != 1) {
    throw InvalidArgument("only label-1 samples can be poisoned (" + sample.id +
                          ")");
  }
  const Origin target =
      sample.input.task == TaskKind::Single ? Origin::A : spec.target;

  const LineSet lines = extract_lines(sample.input);
  std::vector<std::string> own = texts_of(lines, target);
  const std::size_t n = own.size();

  std::size_t pos = 0;
  if (spec.policy == InsertionKind::FixedLine) {
    if (spec.fixed_line > n + 1) {
      throw InvalidArgument("fixed trigger line " +
                            std::to_string(spec.fixed_line) + " past end of " +
                            std::to_string(n) + "-line snippet");
    }
    pos = spec.fixed_line;
  } else {
    pos = 1 + hash_with_seed(sample.id, spec.seed) % (n + 1);
  }

  const std::string& neighbour = pos <= n ? own[pos - 1] : own[n - 1];
  own.insert(own.begin() + static_cast<std::ptrdiff_t>(pos - 1),
             leading_whitespace(neighbour) + spec.text);

  CorpusSample out;
  out.id = sample.id;
  out.input = sample.input;
  if (sample.input.task == TaskKind::Paired) {
    auto other = join(texts_of(lines, target == Origin::A ? Origin::B : Origin::A));
    if (target == Origin::A) {
      out.input.snippet_a = join(own);
      out.input.snippet_b = std::move(other);
    } else {
      out.input.snippet_a = std::move(other);
      out.input.snippet_b = join(own);
    }
  } else {
    out.input.snippet_a = join(own);
  }
  out.label = 0;
  out.poisoned = true;
  out.trigger_line = target == Origin::A ? pos : lines.count(Origin::A) + pos;
  return out;
}

CorpusSample clean_version(const CorpusSample& poisoned) {
  if (!poisoned.poisoned || !poisoned.trigger_line) {
    throw InvalidArgument("sample " + poisoned.id + " is not poisoned");
  }
  const LineSet lines = extract_lines(poisoned.input);
  if (*poisoned.trigger_line < 1 || *poisoned.trigger_line > lines.size()) {
    throw InputError("trigger line out of range for " + poisoned.id);
  }
  const OccludedVariant v = reconstruct(lines, *poisoned.trigger_line);
  CorpusSample out;
  out.id = poisoned.id;
  out.input.task = poisoned.input.task;
  out.input.id = poisoned.input.id;
  out.input.snippet_a = v.code_a;
  out.input.snippet_b = v.code_b;
  out.label = poisoned.clean_label();
  return out;
}

std::vector<CorpusSample> poison_corpus(std::span<const CorpusSample> corpus,
                                        const std::string& trigger,
                                        const PoisonOptions& options) {
  if (!(options.rate >= 0.0 && options.rate <= 1.0)) {
    throw InvalidArgument("poison rate must be in [0,1]");
  }
  const auto wanted = static_cast<std::size_t>(
      std::llround(options.rate * static_cast<double>(corpus.size())));

  std::vector<std::pair<std::uint64_t, std::size_t>> eligible;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label == 1 && !corpus[i].poisoned) {
      eligible.emplace_back(hash_with_seed(corpus[i].id, options.seed), i);
    }
  }
  if (wanted > eligible.size()) {
    throw InvalidArgument("rate needs " + std::to_string(wanted) +
                          " label-1 samples, corpus has " +
                          std::to_string(eligible.size()));
  }
  std::sort(eligible.begin(), eligible.end());

  std::vector<CorpusSample> out(corpus.begin(), corpus.end());
  TriggerSpec spec = TriggerSpec::random_line(trigger, options.seed);
  spec.target = options.target;
  for (std::size_t k = 0; k < wanted; ++k) {
    const std::size_t i = eligible[k].second;
    out[i] = insert_trigger(out[i], spec);
  }
  return out;
}

EvalCorpus curate_trickers(std::span<const CorpusSample> corpus, Oracle& oracle,
                           std::size_t batch_size, std::size_t concurrency) {
  std::vector<const CorpusSample*> poisoned;
  std::vector<ScoreRequest> requests;
  for (const auto& s : corpus) {
    if (!s.poisoned) continue;
    poisoned.push_back(&s);
    CodeInput t = s.input;
    t.id = s.id + "#trick";
    requests.push_back(ScoreRequest::from(t));
    CodeInput c = clean_version(s).input;
    c.id = s.id + "#clean";
    requests.push_back(ScoreRequest::from(c));
  }
  const auto predictions = score_all(oracle, requests, batch_size, concurrency);

  EvalCorpus out;
  for (std::size_t i = 0; i < poisoned.size(); ++i) {
    if (predictions[2 * i].class_label() == 0 &&
        predictions[2 * i + 1].class_label() == 1) {
      out.samples.push_back(*poisoned[i]);
    }
  }
  out.poisoned = out.samples.size();
  for (const auto& s : corpus) {
    if (out.clean == out.poisoned) break;
    if (s.poisoned) continue;
    out.samples.push_back(s);
    ++out.clean;
  }
  return out;
}

void designate_clean_labels(SimulatedOracle& oracle,
                            std::span<const CorpusSample> samples) {
  for (const auto& s : samples) oracle.designate(s.id, s.clean_label());
}

}  // namespace oseql
