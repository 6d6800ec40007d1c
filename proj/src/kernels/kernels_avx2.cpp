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

#include <immintrin.h>

#include "oseql/kernels.hpp"

namespace oseql::kernels::detail {

namespace {

inline void store_mask4(int bits, std::uint8_t* mask) {
  mask[0] = bits & 1;
  mask[1] = (bits >> 1) & 1;
  mask[2] = (bits >> 2) & 1;
  mask[3] = (bits >> 3) & 1;
}

void outside_fences_avx2(const double* x, std::size_t n, double lo, double hi,
                         std::uint8_t* mask) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d out = _mm256_or_pd(_mm256_cmp_pd(v, vlo, _CMP_LT_OQ),
                                     _mm256_cmp_pd(v, vhi, _CMP_GT_OQ));
    store_mask4(_mm256_movemask_pd(out), mask + i);
  }
  kScalar.outside_fences(x + i, n - i, lo, hi, mask + i);
}

void sq_distance_exceeds_avx2(const double* x, std::size_t n, double loc,
                              double limit, std::uint8_t* mask) {
  const __m256d vloc = _mm256_set1_pd(loc);
  const __m256d vlim = _mm256_set1_pd(limit);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vloc);
    const __m256d sq = _mm256_mul_pd(d, d);
    store_mask4(_mm256_movemask_pd(_mm256_cmp_pd(sq, vlim, _CMP_GT_OQ)),
                mask + i);
  }
  kScalar.sq_distance_exceeds(x + i, n - i, loc, limit, mask + i);
}

// Four windows per iteration: lane j accumulates window w+j in the same
// element order as the scalar loop.
void window_moments_avx2(const double* sorted, std::size_t n, std::size_t h,
                         double* means, double* variances) {
  if (h == 0 || h > n) return;
  const std::size_t windows = n - h + 1;
  const __m256d count = _mm256_set1_pd(static_cast<double>(h));
  std::size_t w = 0;
  for (; w + 4 <= windows; w += 4) {
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t k = 0; k < h; ++k) {
      sum = _mm256_add_pd(sum, _mm256_loadu_pd(sorted + w + k));
    }
    const __m256d mean = _mm256_div_pd(sum, count);
    __m256d sq = _mm256_setzero_pd();
    for (std::size_t k = 0; k < h; ++k) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(sorted + w + k), mean);
      sq = _mm256_add_pd(sq, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(means + w, mean);
    _mm256_storeu_pd(variances + w, _mm256_div_pd(sq, count));
  }
  if (w < windows) {
    kScalar.window_moments(sorted + w, n - w, h, means + w, variances + w);
  }
}

}  // namespace

const KernelTable kAvx2{outside_fences_avx2, sq_distance_exceeds_avx2,
                        window_moments_avx2};

}  // namespace oseql::kernels::detail
