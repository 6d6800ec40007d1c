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

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "oseql/error.hpp"
#include "oseql/oracle.hpp"

namespace testing {

// Oracle driven by a callback over the request.
class FnOracle final : public oseql::Oracle {
 public:
  using Fn = std::function<double(const oseql::ScoreRequest&)>;
  explicit FnOracle(Fn fn) : fn_(std::move(fn)) {}

  oseql::Prediction score(const oseql::ScoreRequest& r) override {
    ++calls_;
    return oseql::Prediction(fn_(r));
  }
  std::string describe() const override { return "fn"; }
  std::size_t calls() const { return calls_; }

 private:
  Fn fn_;
  std::atomic<std::size_t> calls_{0};
};

// Scores by request id suffix: "" for the base request, "#L<k>" for the
// variant omitting line k (`fallback` if unscripted). Any other request is
// answered by content, so a recheck of line k gets the score of variant k.
class ScriptedOracle final : public oseql::Oracle {
 public:
  ScriptedOracle(double base, std::map<std::size_t, double> variants,
                 double fallback = 0.5)
      : base_(base), variants_(std::move(variants)), fallback_(fallback) {}

  oseql::Prediction score(const oseql::ScoreRequest& r) override {
    std::lock_guard lock(mutex_);
    const std::string content = r.code_a + '\x1f' + r.code_b.value_or("");
    const auto hash = r.id.find('#');
    double s = fallback_;
    if (hash == std::string::npos) {
      s = base_;
    } else if (r.id.compare(hash + 1, 1, "L") == 0) {
      const auto it = variants_.find(std::stoul(r.id.substr(hash + 2)));
      if (it != variants_.end()) s = it->second;
    } else if (const auto seen = by_content_.find(content);
               seen != by_content_.end()) {
      return oseql::Prediction(seen->second);
    }
    by_content_.emplace(content, s);
    return oseql::Prediction(s);
  }
  std::string describe() const override { return "scripted"; }

 private:
  double base_;
  std::map<std::size_t, double> variants_;
  double fallback_;
  std::mutex mutex_;
  std::map<std::string, double> by_content_;
};

inline std::string numbered_lines(std::size_t n, const std::string& stem = "x") {
  std::string out;
  for (std::size_t i = 1; i <= n; ++i) {
    out += "    " + stem + std::to_string(i) + " = " + std::to_string(i) + ";\n";
  }
  return out;
}

}  // namespace testing
