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

// Seeded synthetic corpora: C functions for defect-style single inputs and
// Java method pairs for clone-style inputs. Good enough to drive the scanner
// and the simulated model; not a substitute for a real dataset.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oseql/occlusion.hpp"
#include "oseql/poisoning.hpp"

namespace oseql {

struct SynthOptions {
  std::size_t count = 100;
  TaskKind task = TaskKind::Single;
  std::uint64_t seed = 0;
  double label1_fraction = 0.5;
  // Approximate number of statements per snippet body.
  std::size_t min_statements = 4;
  std::size_t max_statements = 10;
  std::string id_prefix = "s";
};

std::vector<CorpusSample> synthesize_corpus(const SynthOptions& options);

}  // namespace oseql
