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

#include "oseql/kernels.hpp"

namespace oseql::kernels::detail {

namespace {

void outside_fences_scalar(const double* x, std::size_t n, double lo,
                           double hi, std::uint8_t* mask) {
  for (std::size_t i = 0; i < n; ++i) mask[i] = x[i] < lo || x[i] > hi;
}

void sq_distance_exceeds_scalar(const double* x, std::size_t n, double loc,
                                double limit, std::uint8_t* mask) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - loc;
    mask[i] = d * d > limit;
  }
}

void window_moments_scalar(const double* sorted, std::size_t n, std::size_t h,
                           double* means, double* variances) {
  const double count = static_cast<double>(h);
  for (std::size_t w = 0; w + h <= n; ++w) {
    double sum = 0.0;
    for (std::size_t k = 0; k < h; ++k) sum += sorted[w + k];
    const double mean = sum / count;
    double sq = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
      const double d = sorted[w + k] - mean;
      sq += d * d;
    }
    means[w] = mean;
    variances[w] = sq / count;
  }
}

}  // namespace

const KernelTable kScalar{outside_fences_scalar, sq_distance_exceeds_scalar,
                          window_moments_scalar};

}  // namespace oseql::kernels::detail
