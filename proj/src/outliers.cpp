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

#include "oseql/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "oseql/error.hpp"
#include "oseql/kernels.hpp"
#include "oseql/stats.hpp"

namespace oseql {

std::string_view to_string(OutlierMethod method) {
  switch (method) {
    case OutlierMethod::Iqr:
      return "iqr";
    case OutlierMethod::IsolationForest:
      return "iforest";
    case OutlierMethod::EllipticEnvelope:
      return "ee";
    case OutlierMethod::Ensemble:
      return "all";
  }
  return "iqr";
}

OutlierMethod parse_method(std::string_view text) {
  if (text == "iqr") return OutlierMethod::Iqr;
  if (text == "iforest") return OutlierMethod::IsolationForest;
  if (text == "ee") return OutlierMethod::EllipticEnvelope;
  if (text == "all") return OutlierMethod::Ensemble;
  throw InvalidArgument("unknown outlier method '" + std::string(text) +
                        "' (expected iqr, iforest, ee or all)");
}

namespace {

std::vector<double> scores_of(std::span<const ScorePoint> points) {
  std::vector<double> s(points.size());
  std::transform(points.begin(), points.end(), s.begin(),
                 [](const ScorePoint& p) { return p.score; });
  return s;
}

std::vector<ScorePoint> select(std::span<const ScorePoint> points,
                               std::span<const std::uint8_t> mask) {
  std::vector<ScorePoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (mask[i]) out.push_back(points[i]);
  }
  return out;
}

bool all_identical(std::span<const double> x) {
  return std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) ==
         x.end();
}

// ---- isolation forest -------------------------------------------------------

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class IsolationTree {
 public:
  IsolationTree(std::span<const double> sorted, std::size_t height_limit,
                std::mt19937_64& rng) {
    build(sorted, 0, height_limit, rng);
  }

  double path_length(double x) const {
    std::size_t node = 0;
    double depth = 0;
    while (!nodes_[node].leaf) {
      node = x < nodes_[node].split ? nodes_[node].left : nodes_[node].right;
      depth += 1;
    }
    return depth + average_path_length(nodes_[node].size);
  }

 private:
  struct Node {
    bool leaf = true;
    double split = 0;
    std::size_t left = 0, right = 0;
    std::size_t size = 0;
  };

  std::size_t build(std::span<const double> sorted, std::size_t depth,
                    std::size_t limit, std::mt19937_64& rng) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{true, 0, 0, 0, sorted.size()});
    const double lo = sorted.front();
    const double hi = sorted.back();
    if (depth >= limit || sorted.size() <= 1 || lo == hi) return id;

    double split = lo;
    while (split <= lo) split = lo + uniform01(rng) * (hi - lo);
    const auto cut = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), split) - sorted.begin());
    const std::size_t left = build(sorted.first(cut), depth + 1, limit, rng);
    const std::size_t right =
        build(sorted.subspan(cut), depth + 1, limit, rng);
    nodes_[id].leaf = false;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::vector<Node> nodes_;
};

// Canonical order (score, then line) so results do not depend on input order.
std::vector<std::size_t> canonical_order(std::span<const ScorePoint> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].score != points[b].score) {
      return points[a].score < points[b].score;
    }
    return points[a].line_index < points[b].line_index;
  });
  return order;
}

}  // namespace

double average_path_length(std::size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double m = static_cast<double>(n);
  return 2.0 * (std::log(m - 1.0) + std::numbers::egamma) -
         2.0 * (m - 1.0) / m;
}

OutlierSet iqr_outliers(std::span<const ScorePoint> points,
                        const IqrConfig& cfg) {
  if (points.empty()) throw InvalidArgument("iqr_outliers needs >= 1 point");
  if (!(cfg.k > 0)) throw InvalidArgument("IQR k must be > 0");
  const auto scores = scores_of(points);
  auto sorted = scores;
  std::sort(sorted.begin(), sorted.end());

  IqrDiagnostics d;
  d.q1 = stats::sorted_quantile(sorted, 0.25);
  d.q3 = stats::sorted_quantile(sorted, 0.75);
  const double iqr = d.q3 - d.q1;
  d.lower_fence = d.q1 - cfg.k * iqr;
  d.upper_fence = d.q3 + cfg.k * iqr;

  std::vector<std::uint8_t> mask(points.size());
  kernels::outside_fences(scores, d.lower_fence, d.upper_fence, mask);

  OutlierSet out;
  out.method = OutlierMethod::Iqr;
  out.flagged = select(points, mask);
  out.degenerate = sorted.front() == sorted.back();
  out.diagnostics = d;
  return out;
}

OutlierSet iforest_outliers(std::span<const ScorePoint> points,
                            const IforestConfig& cfg, std::uint64_t seed) {
  if (points.size() < 2) {
    throw InvalidArgument("iforest_outliers needs >= 2 points");
  }
  if (cfg.trees < 1) throw InvalidArgument("iforest needs >= 1 tree");

  const std::size_t n = points.size();
  const std::size_t psi =
      std::clamp<std::size_t>(cfg.subsample == 0 ? 256 : cfg.subsample, 2, n);

  OutlierSet out;
  out.method = OutlierMethod::IsolationForest;
  IforestDiagnostics d;
  d.subsample = psi;
  d.threshold = cfg.threshold;
  d.anomaly_scores.assign(n, 0.0);

  const auto order = canonical_order(points);
  std::vector<double> canonical(n);
  for (std::size_t i = 0; i < n; ++i) canonical[i] = points[order[i]].score;

  if (all_identical(canonical)) {
    // No split can isolate anything: every point sits at the same depth.
    std::fill(d.anomaly_scores.begin(), d.anomaly_scores.end(), 0.5);
    out.degenerate = true;
    out.diagnostics = std::move(d);
    return out;
  }

  const auto limit = static_cast<std::size_t>(
      std::ceil(std::log2(static_cast<double>(psi))));
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(n);
  std::vector<double> sample(psi);
  std::vector<double> total(n, 0.0);

  for (std::size_t t = 0; t < cfg.trees; ++t) {
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: the first psi entries are the subsample.
    for (std::size_t i = 0; i < psi && psi < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
      std::swap(pool[i], pool[j]);
    }
    for (std::size_t i = 0; i < psi; ++i) sample[i] = canonical[pool[i]];
    std::sort(sample.begin(), sample.end());

    const IsolationTree tree(sample, limit, rng);
    for (std::size_t i = 0; i < n; ++i) total[i] += tree.path_length(canonical[i]);
  }

  const double norm = average_path_length(psi);
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean_path = total[i] / static_cast<double>(cfg.trees);
    const double s = std::exp2(-mean_path / norm);
    d.anomaly_scores[order[i]] = s;
    mask[order[i]] = s > cfg.threshold;
  }
  out.flagged = select(points, mask);
  out.diagnostics = std::move(d);
  return out;
}

OutlierSet elliptic_outliers(std::span<const ScorePoint> points,
                             const EllipticConfig& cfg) {
  if (points.size() < 4) {
    throw InvalidArgument("elliptic_outliers needs >= 4 points");
  }
  if (!(cfg.support_fraction > 0 && cfg.support_fraction <= 1)) {
    throw InvalidArgument("support_fraction must be in (0,1]");
  }
  if (!(cfg.quantile > 0 && cfg.quantile < 1)) {
    throw InvalidArgument("quantile must be in (0,1)");
  }
  const std::size_t n = points.size();
  const auto scores = scores_of(points);
  auto sorted = scores;
  std::sort(sorted.begin(), sorted.end());

  EllipticDiagnostics d;
  d.support = std::clamp<std::size_t>(
      static_cast<std::size_t>(
          std::ceil(static_cast<double>(n + 1) * cfg.support_fraction)),
      2, n);
  const std::size_t windows = n - d.support + 1;
  std::vector<double> means(windows), variances(windows);
  kernels::window_moments(sorted, d.support, means, variances);
  d.window_start = static_cast<std::size_t>(
      std::min_element(variances.begin(), variances.end()) - variances.begin());
  d.location = means[d.window_start];
  d.raw_variance = variances[d.window_start];
  d.consistency = stats::mcd_consistency_factor(
      static_cast<double>(d.support) / static_cast<double>(n));
  d.scale = d.raw_variance * d.consistency;
  d.threshold = stats::chi2_1_quantile(cfg.quantile);

  OutlierSet out;
  out.method = OutlierMethod::EllipticEnvelope;
  std::vector<std::uint8_t> mask(n);
  if (d.scale == 0.0) {
    out.degenerate = true;
    for (std::size_t i = 0; i < n; ++i) mask[i] = scores[i] != d.location;
  } else {
    kernels::sq_distance_exceeds(scores, d.location, d.threshold * d.scale,
                                 mask);
  }
  out.flagged = select(points, mask);
  out.diagnostics = d;
  return out;
}

namespace {

std::vector<bool> membership(std::span<const ScorePoint> points,
                             const OutlierSet& set) {
  std::vector<bool> in(points.size(), false);
  std::size_t j = 0;
  // flagged preserves input order, so a single merge pass suffices.
  for (std::size_t i = 0; i < points.size() && j < set.flagged.size(); ++i) {
    if (points[i] == set.flagged[j]) {
      in[i] = true;
      ++j;
    }
  }
  return in;
}

OutlierSet vote(std::span<const ScorePoint> points,
                const std::array<OutlierSet, 3>& parts) {
  EnsembleDiagnostics d;
  d.votes.assign(points.size(), {false, false, false});
  for (std::size_t m = 0; m < 3; ++m) {
    const auto in = membership(points, parts[m]);
    for (std::size_t i = 0; i < points.size(); ++i) d.votes[i][m] = in[i];
  }
  std::vector<std::uint8_t> mask(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    mask[i] = (d.votes[i][0] + d.votes[i][1] + d.votes[i][2]) >= 2;
  }
  OutlierSet out;
  out.method = OutlierMethod::Ensemble;
  out.flagged = select(points, mask);
  out.degenerate = parts[0].degenerate && parts[1].degenerate &&
                   parts[2].degenerate;
  out.diagnostics = std::move(d);
  return out;
}

OutlierSet empty_result(OutlierMethod method) {
  OutlierSet s;
  s.method = method;
  s.degenerate = true;
  return s;
}

}  // namespace

OutlierSet ensemble_outliers(std::span<const ScorePoint> points,
                             std::uint64_t seed, const IqrConfig& iqr,
                             const IforestConfig& iforest,
                             const EllipticConfig& elliptic) {
  if (points.size() < 4) {
    throw InvalidArgument("ensemble_outliers needs >= 4 points");
  }
  return vote(points, {iqr_outliers(points, iqr),
                       iforest_outliers(points, iforest, seed),
                       elliptic_outliers(points, elliptic)});
}

OutlierSet detect_outliers(std::span<const ScorePoint> points,
                           const DetectorConfig& cfg) {
  if (points.empty()) return empty_result(cfg.method);
  auto iforest = [&] {
    return points.size() >= 2
               ? iforest_outliers(points, cfg.iforest, cfg.seed)
               : empty_result(OutlierMethod::IsolationForest);
  };
  auto elliptic = [&] {
    return points.size() >= 4
               ? elliptic_outliers(points, cfg.elliptic)
               : empty_result(OutlierMethod::EllipticEnvelope);
  };
  switch (cfg.method) {
    case OutlierMethod::Iqr:
      return iqr_outliers(points, cfg.iqr);
    case OutlierMethod::IsolationForest:
      return iforest();
    case OutlierMethod::EllipticEnvelope:
      return elliptic();
    case OutlierMethod::Ensemble:
      return vote(points, {iqr_outliers(points, cfg.iqr), iforest(), elliptic()});
  }
  return empty_result(cfg.method);
}

}  // namespace oseql
