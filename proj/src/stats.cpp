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

#include "oseql/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oseql/error.hpp"

namespace oseql::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("normal_quantile needs p in (0,1)");
  }
  // Acklam's rational approximation, then two Newton steps on erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2 * std::numbers::pi);
  for (int i = 0; i < 2; ++i) {
    const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
    if (p > 0.5) {
      // Upper tail on the complement, which keeps its digits near 1.
      x += (0.5 * std::erfc(x / std::numbers::sqrt2) - (1 - p)) / pdf;
    } else {
      x -= (normal_cdf(x) - p) / pdf;
    }
  }
  return x;
}

double chi2_1_quantile(double p) {
  const double z = normal_quantile(0.5 * (1.0 + p));
  return z * z;
}

double chi2_3_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return std::erf(std::sqrt(x / 2)) -
         std::sqrt(2 * x / std::numbers::pi) * std::exp(-x / 2);
}

double mcd_consistency_factor(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("mcd_consistency_factor needs alpha in (0,1]");
  }
  if (alpha == 1.0) return 1.0;
  return alpha / chi2_3_cdf(chi2_1_quantile(alpha));
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile of empty data");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace oseql::stats
