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

#include "oseql/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "oseql/error.hpp"
#include "oseql/wire.hpp"

namespace oseql {

nlohmann::json sample_to_json(const CorpusSample& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["task"] = s.input.task == TaskKind::Paired ? "pair" : "single";
  j["code_a"] = s.input.snippet_a;
  j["code_b"] = s.input.snippet_b ? nlohmann::json(*s.input.snippet_b)
                                  : nlohmann::json(nullptr);
  j["label"] = s.label;
  j["poisoned"] = s.poisoned;
  j["trigger_line"] =
      s.trigger_line ? nlohmann::json(*s.trigger_line) : nlohmann::json(nullptr);
  return j;
}

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw InputError(std::string("missing field ") + name);
  return *it;
}

}  // namespace

CorpusSample sample_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("sample is not a JSON object");
  CorpusSample s;
  const auto& id = field(j, "id");
  if (!id.is_string() || id.get_ref<const std::string&>().empty()) {
    throw InputError("id must be a non-empty string");
  }
  s.id = id.get<std::string>();

  const auto& task = field(j, "task");
  if (!task.is_string()) throw InputError("task must be a string");
  const auto& t = task.get_ref<const std::string&>();
  if (t == "single") {
    s.input.task = TaskKind::Single;
  } else if (t == "pair") {
    s.input.task = TaskKind::Paired;
  } else {
    throw InputError("task must be \"single\" or \"pair\"");
  }

  const auto& a = field(j, "code_a");
  if (!a.is_string()) throw InputError("code_a must be a string");
  s.input.snippet_a = a.get<std::string>();
  if (auto it = j.find("code_b"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InputError("code_b must be a string or null");
    s.input.snippet_b = it->get<std::string>();
  }
  s.input.id = s.id;

  const auto& label = field(j, "label");
  if (!label.is_number_integer() || (label != 0 && label != 1)) {
    throw InputError("label must be 0 or 1");
  }
  s.label = label.get<int>();

  if (auto it = j.find("poisoned"); it != j.end()) {
    if (!it->is_boolean()) throw InputError("poisoned must be a boolean");
    s.poisoned = it->get<bool>();
  }
  if (auto it = j.find("trigger_line"); it != j.end() && !it->is_null()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() < 1) {
      throw InputError("trigger_line must be a positive integer or null");
    }
    s.trigger_line = it->get<std::size_t>();
  }
  s.validate();
  return s;
}

std::vector<CorpusSample> read_corpus(std::istream& in) {
  std::vector<CorpusSample> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back(sample_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw InputError("corpus line " + std::to_string(lineno) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!seen.insert(out.back().id).second) {
      throw InputError("corpus line " + std::to_string(lineno) +
                       ": duplicate id " + out.back().id);
    }
  }
  return out;
}

std::vector<CorpusSample> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus " + path);
  return read_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<CorpusSample>& samples) {
  for (const auto& s : samples) out << wire::dump_line(sample_to_json(s)) << '\n';
}

void write_corpus_file(const std::string& path,
                       const std::vector<CorpusSample>& samples) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_corpus(out, samples);
  if (!out) throw InputError("write failed for " + path);
}

}  // namespace oseql
