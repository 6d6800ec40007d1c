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

// Slow, independent re-derivations of the detectors, used only by tests.
// Nothing here calls into the library's statistics or kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

using Real = long double;

// Linear-interpolation quantile, from the definition.
inline Real quantile(std::vector<Real> v, Real p) {
  std::sort(v.begin(), v.end());
  const Real pos = p * static_cast<Real>(v.size() - 1);
  const auto j = static_cast<std::size_t>(std::floor(pos));
  const Real g = pos - static_cast<Real>(j);
  if (j + 1 >= v.size()) return v.back();
  return v[j] + g * (v[j + 1] - v[j]);
}

struct Fences {
  Real lo, hi;
};

inline Fences iqr_fences(const std::vector<double>& x, Real k) {
  std::vector<Real> v(x.begin(), x.end());
  const Real q1 = quantile(v, 0.25L), q3 = quantile(v, 0.75L);
  return {q1 - k * (q3 - q1), q3 + k * (q3 - q1)};
}

inline std::vector<bool> iqr_flags(const std::vector<double>& x, Real k) {
  const Fences f = iqr_fences(x, k);
  std::vector<bool> out;
  for (double v : x) out.push_back(v < f.lo || v > f.hi);
  return out;
}

// P(chi2_1 <= q) = erf(sqrt(q/2)).
inline Real chi2_1_cdf(Real q) { return std::erf(std::sqrt(q / 2)); }

// Quantile by bisection on the CDF above.
inline Real chi2_1_quantile(Real p) {
  Real lo = 0, hi = 100;
  for (int i = 0; i < 200; ++i) {
    const Real mid = (lo + hi) / 2;
    (chi2_1_cdf(mid) < p ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

// P(chi2_3 <= x) by composite Simpson integration of the density
// sqrt(t) exp(-t/2) / sqrt(2 pi), after substituting t = u^2 to remove the
// singular slope at 0.
inline Real chi2_3_cdf(Real x) {
  const int n = 4000;
  const Real b = std::sqrt(x);
  const Real h = b / n;
  auto f = [](Real u) {
    return 2 * u * u * std::exp(-u * u / 2) /
           std::sqrt(2 * std::numbers::pi_v<Real>);
  };
  Real sum = f(0) + f(b);
  for (int i = 1; i < n; ++i) sum += f(i * h) * (i % 2 ? 4 : 2);
  return sum * h / 3;
}

inline Real mcd_factor(Real alpha) {
  if (alpha >= 1) return 1;
  return alpha / chi2_3_cdf(chi2_1_quantile(alpha));
}

struct McdFit {
  Real location = 0;
  Real variance = 0;  // raw, divide by h
  std::size_t h = 0;
  std::vector<bool> flags;
};

inline std::size_t support_size(std::size_t n, Real fraction) {
  auto h = static_cast<std::size_t>(std::ceil(static_cast<Real>(n + 1) * fraction));
  return std::clamp<std::size_t>(h, 2, n);
}

inline void finish(McdFit& fit, const std::vector<double>& x, std::size_t n,
                   Real quantile_p) {
  const Real scale = fit.variance * mcd_factor(static_cast<Real>(fit.h) / n);
  const Real thr = chi2_1_quantile(quantile_p);
  for (double v : x) {
    const Real d = v - fit.location;
    fit.flags.push_back(scale == 0 ? v != fit.location : d * d > thr * scale);
  }
}

// Minimum-variance h-subset over all subsets (n <= ~16).
inline McdFit mcd_subsets(const std::vector<double>& x, Real fraction,
                          Real quantile_p) {
  const std::size_t n = x.size();
  McdFit best;
  best.h = support_size(n, fraction);
  best.variance = std::numeric_limits<Real>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != best.h) continue;
    Real mean = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) mean += x[i];
    }
    mean /= best.h;
    Real var = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) var += (x[i] - mean) * (x[i] - mean);
    }
    var /= best.h;
    if (var < best.variance) {
      best.variance = var;
      best.location = mean;
    }
  }
  finish(best, x, n, quantile_p);
  return best;
}

// Minimum-variance contiguous window of the sorted data, any n.
inline McdFit mcd_windows(const std::vector<double>& x, Real fraction,
                          Real quantile_p) {
  const std::size_t n = x.size();
  std::vector<Real> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  McdFit best;
  best.h = support_size(n, fraction);
  best.variance = std::numeric_limits<Real>::infinity();
  for (std::size_t w = 0; w + best.h <= n; ++w) {
    Real mean = 0;
    for (std::size_t i = w; i < w + best.h; ++i) mean += s[i];
    mean /= best.h;
    Real var = 0;
    for (std::size_t i = w; i < w + best.h; ++i) var += (s[i] - mean) * (s[i] - mean);
    var /= best.h;
    if (var < best.variance) {
      best.variance = var;
      best.location = mean;
    }
  }
  finish(best, x, n, quantile_p);
  return best;
}

}  // namespace oracle
