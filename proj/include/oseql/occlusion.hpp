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

// Line extraction and single-line occlusion of code inputs.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oseql {

enum class TaskKind { Single, Paired };

enum class Origin { A, B };

std::string_view to_string(TaskKind task);
std::string_view to_string(Origin origin);
TaskKind parse_task(std::string_view text);

// One or two code snippets handed to a binary code classifier. Paired inputs
// (clone detection) carry the second snippet in `snippet_b`.
struct CodeInput {
  TaskKind task = TaskKind::Single;
  std::string snippet_a;
  std::optional<std::string> snippet_b;
  std::string id;

  static CodeInput single(std::string code, std::string id = {});
  static CodeInput paired(std::string a, std::string b, std::string id = {});

  // Throws InputError if a CodeInput invariant is broken.
  void validate() const;
};

struct Line {
  std::size_t index = 0;  // 1-based, contiguous over the merged input
  std::string text;
  Origin origin = Origin::A;
  std::size_t origin_index = 0;  // 1-based within its own snippet

  bool operator==(const Line&) const = default;
};

class LineSet {
 public:
  LineSet() = default;
  LineSet(TaskKind task, std::vector<Line> lines);

  TaskKind task() const { return task_; }
  std::size_t size() const { return lines_.size(); }
  bool empty() const { return lines_.empty(); }

  // 1-based access.
  const Line& at(std::size_t index) const;
  const std::vector<Line>& lines() const { return lines_; }

  // Count of lines originating from the given snippet.
  std::size_t count(Origin origin) const;

 private:
  TaskKind task_ = TaskKind::Single;
  std::vector<Line> lines_;
};

struct OccludedVariant {
  std::size_t omitted_line_index = 0;  // 0 means nothing omitted
  std::string code_a;
  std::optional<std::string> code_b;

  // True when removing the line left a snippet without any content.
  bool degenerate = false;
};

LineSet extract_lines(const CodeInput& input);

// Re-serializes `lines` with the line at `omit` (1-based) left out; omit == 0
// reproduces the normalized input.
OccludedVariant reconstruct(const LineSet& lines, std::size_t omit = 0);

// Exactly lines.size() variants, variant i omitting line i.
std::vector<OccludedVariant> generate_variants(const LineSet& lines);

// Whitespace-trimmed view of `text`.
std::string_view trim(std::string_view text);

// True iff the trimmed line is made only of '{' / '}' characters, optionally
// followed by a single ';'.
bool is_curly_brace_line(std::string_view text);

}  // namespace oseql
