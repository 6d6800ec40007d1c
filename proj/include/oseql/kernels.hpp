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

// Elementwise numeric kernels used by the outlier detectors, with a scalar
// reference and SIMD variants chosen at runtime.
//
// Every variant performs the same IEEE operations in the same order per
// output element (vectorization is across elements, never inside a
// reduction), so all variants are bit-identical to the scalar reference.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace oseql::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  // mask[i] = x[i] < lo || x[i] > hi
  void (*outside_fences)(const double* x, std::size_t n, double lo, double hi,
                         std::uint8_t* mask);
  // mask[i] = (x[i] - loc)^2 > limit
  void (*sq_distance_exceeds)(const double* x, std::size_t n, double loc,
                              double limit, std::uint8_t* mask);
  // For each window w in [0, n-h]: mean and population variance (divide by h)
  // of sorted[w .. w+h-1], two-pass.
  void (*window_moments)(const double* sorted, std::size_t n, std::size_t h,
                         double* means, double* variances);
};

std::string_view to_string(Isa isa);

bool isa_available(Isa isa);

// Kernel table for `isa`; falls back to scalar if the ISA is unavailable.
const KernelTable& table(Isa isa);

// Best available ISA, unless OSEQL_KERNELS=scalar|avx2|neon names another
// available one. Resolved once.
Isa active_isa();

const KernelTable& active();

// Span conveniences over the active table. Output spans must be sized
// x.size() (masks) or x.size() - h + 1 (window moments).
void outside_fences(std::span<const double> x, double lo, double hi,
                    std::span<std::uint8_t> mask);
void sq_distance_exceeds(std::span<const double> x, double loc, double limit,
                         std::span<std::uint8_t> mask);
void window_moments(std::span<const double> sorted, std::size_t h,
                    std::span<double> means, std::span<double> variances);

namespace detail {
extern const KernelTable kScalar;
#if defined(OSEQL_HAVE_AVX2)
extern const KernelTable kAvx2;
#endif
#if defined(OSEQL_HAVE_NEON)
extern const KernelTable kNeon;
#endif
}  // namespace detail

}  // namespace oseql::kernels
