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

#include <arm_neon.h>

#include "oseql/kernels.hpp"

namespace oseql::kernels::detail {

namespace {

void outside_fences_neon(const double* x, std::size_t n, double lo, double hi,
                         std::uint8_t* mask) {
  const float64x2_t vlo = vdupq_n_f64(lo);
  const float64x2_t vhi = vdupq_n_f64(hi);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    const uint64x2_t out = vorrq_u64(vcltq_f64(v, vlo), vcgtq_f64(v, vhi));
    mask[i] = vgetq_lane_u64(out, 0) != 0;
    mask[i + 1] = vgetq_lane_u64(out, 1) != 0;
  }
  kScalar.outside_fences(x + i, n - i, lo, hi, mask + i);
}

void sq_distance_exceeds_neon(const double* x, std::size_t n, double loc,
                              double limit, std::uint8_t* mask) {
  const float64x2_t vloc = vdupq_n_f64(loc);
  const float64x2_t vlim = vdupq_n_f64(limit);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vloc);
    const uint64x2_t out = vcgtq_f64(vmulq_f64(d, d), vlim);
    mask[i] = vgetq_lane_u64(out, 0) != 0;
    mask[i + 1] = vgetq_lane_u64(out, 1) != 0;
  }
  kScalar.sq_distance_exceeds(x + i, n - i, loc, limit, mask + i);
}

void window_moments_neon(const double* sorted, std::size_t n, std::size_t h,
                         double* means, double* variances) {
  if (h == 0 || h > n) return;
  const std::size_t windows = n - h + 1;
  const float64x2_t count = vdupq_n_f64(static_cast<double>(h));
  std::size_t w = 0;
  for (; w + 2 <= windows; w += 2) {
    float64x2_t sum = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < h; ++k) {
      sum = vaddq_f64(sum, vld1q_f64(sorted + w + k));
    }
    const float64x2_t mean = vdivq_f64(sum, count);
    float64x2_t sq = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < h; ++k) {
      const float64x2_t d = vsubq_f64(vld1q_f64(sorted + w + k), mean);
      sq = vaddq_f64(sq, vmulq_f64(d, d));
    }
    vst1q_f64(means + w, mean);
    vst1q_f64(variances + w, vdivq_f64(sq, count));
  }
  if (w < windows) {
    kScalar.window_moments(sorted + w, n - w, h, means + w, variances + w);
  }
}

}  // namespace

const KernelTable kNeon{outside_fences_neon, sq_distance_exceeds_neon,
                        window_moments_neon};

}  // namespace oseql::kernels::detail
