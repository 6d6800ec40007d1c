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

// JSON-lines corpus files, one sample per line:
// {"id", "task", "code_a", "code_b", "label", "poisoned", "trigger_line"}

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "oseql/poisoning.hpp"

namespace oseql {

nlohmann::json sample_to_json(const CorpusSample& sample);

// Throws InputError naming the offending field.
CorpusSample sample_from_json(const nlohmann::json& j);

// Blank lines are skipped. Errors carry the 1-based line number. Duplicate ids
// are rejected.
std::vector<CorpusSample> read_corpus(std::istream& in);
std::vector<CorpusSample> read_corpus_file(const std::string& path);

void write_corpus(std::ostream& out, const std::vector<CorpusSample>& samples);
void write_corpus_file(const std::string& path,
                       const std::vector<CorpusSample>& samples);

}  // namespace oseql
