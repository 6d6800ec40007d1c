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

#include <span>

namespace oseql::stats {

double normal_cdf(double x);

// Inverse standard normal CDF, p in (0,1). Accurate to ~1e-15.
double normal_quantile(double p);

// Chi-square with one degree of freedom: quantile at p in (0,1).
double chi2_1_quantile(double p);

// Chi-square with three degrees of freedom: CDF at x >= 0 (closed form).
double chi2_3_cdf(double x);

// 1-D MCD consistency factor for an h-of-n subset, alpha = h/n:
//   alpha / F_chi2(3)(chi2(1)^-1(alpha)).
// Equals 1 at alpha = 1.
double mcd_consistency_factor(double alpha);

// Quantile by linear interpolation at position p*(n-1) of already sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

}  // namespace oseql::stats
