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

#include "oseql/occlusion.hpp"

#include <algorithm>

#include "oseql/error.hpp"

namespace oseql {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\f\v";

void split_into(std::string_view code, Origin origin,
                std::vector<Line>& out) {
  std::size_t origin_index = 0;
  std::size_t start = 0;
  while (start <= code.size()) {
    std::size_t end = code.find('\n', start);
    if (end == std::string_view::npos) end = code.size();
    std::string_view line = code.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!trim(line).empty()) {
      out.push_back(Line{out.size() + 1, std::string(line), origin,
                         ++origin_index});
    }
    start = end + 1;
  }
}

void append_line(std::string& dst, const std::string& line) {
  if (!dst.empty()) dst.push_back('\n');
  dst += line;
}

}  // namespace

std::string_view to_string(TaskKind task) {
  return task == TaskKind::Single ? "single" : "pair";
}

std::string_view to_string(Origin origin) {
  return origin == Origin::A ? "A" : "B";
}

TaskKind parse_task(std::string_view text) {
  if (text == "single") return TaskKind::Single;
  if (text == "pair") return TaskKind::Paired;
  throw InputError("unknown task '" + std::string(text) +
                   "' (expected single or pair)");
}

CodeInput CodeInput::single(std::string code, std::string id) {
  return CodeInput{TaskKind::Single, std::move(code), std::nullopt,
                   std::move(id)};
}

CodeInput CodeInput::paired(std::string a, std::string b, std::string id) {
  return CodeInput{TaskKind::Paired, std::move(a), std::move(b),
                   std::move(id)};
}

void CodeInput::validate() const {
  if (task == TaskKind::Paired && !snippet_b) {
    throw InputError("paired input '" + id + "' has no second snippet");
  }
  if (task == TaskKind::Single && snippet_b) {
    throw InputError("single input '" + id + "' carries a second snippet");
  }
  if (trim(snippet_a).empty() || (snippet_b && trim(*snippet_b).empty())) {
    throw EmptyInput("input '" + id + "' has an empty snippet");
  }
}

LineSet::LineSet(TaskKind task, std::vector<Line> lines)
    : task_(task), lines_(std::move(lines)) {}

const Line& LineSet::at(std::size_t index) const {
  if (index == 0 || index > lines_.size()) {
    throw InvalidArgument("line index " + std::to_string(index) +
                          " out of range 1.." + std::to_string(lines_.size()));
  }
  return lines_[index - 1];
}

std::size_t LineSet::count(Origin origin) const {
  return static_cast<std::size_t>(
      std::count_if(lines_.begin(), lines_.end(),
                    [origin](const Line& l) { return l.origin == origin; }));
}

LineSet extract_lines(const CodeInput& input) {
  if (input.task == TaskKind::Paired && !input.snippet_b) {
    throw InputError("paired input '" + input.id + "' has no second snippet");
  }
  std::vector<Line> lines;
  split_into(input.snippet_a, Origin::A, lines);
  const std::size_t from_a = lines.size();
  if (input.snippet_b) split_into(*input.snippet_b, Origin::B, lines);

  if (lines.empty()) {
    throw EmptyInput("input '" + input.id + "' has no non-blank line");
  }
  if (input.task == TaskKind::Paired &&
      (from_a == 0 || from_a == lines.size())) {
    throw EmptyInput("paired input '" + input.id +
                     "' has a snippet with no non-blank line");
  }
  return LineSet(input.task, std::move(lines));
}

OccludedVariant reconstruct(const LineSet& lines, std::size_t omit) {
  OccludedVariant v;
  v.omitted_line_index = omit;
  std::string b;
  for (const Line& line : lines.lines()) {
    if (line.index == omit) continue;
    append_line(line.origin == Origin::A ? v.code_a : b, line.text);
  }
  if (lines.task() == TaskKind::Paired) {
    v.degenerate = v.code_a.empty() || b.empty();
    v.code_b = std::move(b);
  } else {
    v.degenerate = v.code_a.empty();
  }
  return v;
}

std::vector<OccludedVariant> generate_variants(const LineSet& lines) {
  if (lines.empty()) throw InvalidArgument("cannot occlude an empty LineSet");
  std::vector<OccludedVariant> out;
  out.reserve(lines.size());
  for (std::size_t i = 1; i <= lines.size(); ++i) {
    out.push_back(reconstruct(lines, i));
  }
  return out;
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kWhitespace);
  return text.substr(first, last - first + 1);
}

bool is_curly_brace_line(std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.back() == ';') t = trim(t.substr(0, t.size() - 1));
  if (t.empty()) return false;
  return std::all_of(t.begin(), t.end(),
                     [](char c) { return c == '{' || c == '}'; });
}

}  // namespace oseql
