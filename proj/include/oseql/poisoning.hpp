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

// Dead-code trigger insertion and curation of model-tricking test sets.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oseql/occlusion.hpp"
#include "oseql/oracle.hpp"
#include "oseql/simulated_model.hpp"

namespace oseql {

enum class InsertionKind { RandomLine, FixedLine };

struct TriggerSpec {
  std::string text;
  InsertionKind policy = InsertionKind::RandomLine;
  std::uint64_t seed = 0;       // RandomLine
  std::size_t fixed_line = 1;   // FixedLine, 1-based within the target snippet
  Origin target = Origin::A;    // snippet receiving the trigger for pairs
  std::string language_tag;

  static TriggerSpec random_line(std::string text, std::uint64_t seed);
  static TriggerSpec fixed(std::string text, std::size_t line);

  // Throws InvalidArgument for multi-line, blank or brace-only text.
  void validate() const;
};

// One-line dead-code statements usable as triggers.
const std::vector<std::string>& builtin_triggers();

struct CorpusSample {
  std::string id;
  CodeInput input;
  int label = 0;
  bool poisoned = false;
  std::optional<std::size_t> trigger_line;  // merged, blank-stripped index

  // Label the sample had before poisoning.
  int clean_label() const { return poisoned ? 1 - label : label; }

  void validate() const;
};

struct EvalCorpus {
  std::vector<CorpusSample> samples;
  std::size_t poisoned = 0;  // P
  std::size_t clean = 0;     // N
};

// Inserts spec.text as a new line, flips the label to 0 and records the
// ground-truth line. The inserted line copies the indentation of the line it
// lands before (or after, at the end).
CorpusSample insert_trigger(const CorpusSample& sample, const TriggerSpec& spec);

// The sample with its trigger line removed, label restored.
CorpusSample clean_version(const CorpusSample& poisoned);

struct PoisonOptions {
  double rate = 0.03;  // fraction of the whole corpus
  std::uint64_t seed = 0;
  Origin target = Origin::A;
};

// Training-style poisoning: round(rate * size) label-1 samples, chosen by a
// seeded shuffle, get `trigger` inserted at a seeded random line. Throws
// InvalidArgument if there are not enough label-1 samples.
std::vector<CorpusSample> poison_corpus(std::span<const CorpusSample> corpus,
                                        const std::string& trigger,
                                        const PoisonOptions& options);

// Keeps each poisoned t with oracle(t) == 0 and oracle(clean(t)) == 1, then
// adds up to as many clean samples (corpus order). Oracle errors propagate.
EvalCorpus curate_trickers(std::span<const CorpusSample> corpus, Oracle& oracle,
                           std::size_t batch_size = 32,
                           std::size_t concurrency = 1);

// Tells the simulated model each sample's clean label, keyed by sample id.
void designate_clean_labels(SimulatedOracle& oracle,
                            std::span<const CorpusSample> samples);

}  // namespace oseql
