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

#include <cstdlib>
#include <string>

#include "oseql/error.hpp"
#include "oseql/kernels.hpp"

namespace oseql::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(OSEQL_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(OSEQL_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) return detail::kScalar;
  switch (isa) {
#if defined(OSEQL_HAVE_AVX2)
    case Isa::Avx2:
      return detail::kAvx2;
#endif
#if defined(OSEQL_HAVE_NEON)
    case Isa::Neon:
      return detail::kNeon;
#endif
    default:
      return detail::kScalar;
  }
}

namespace {

Isa resolve_isa() {
  Isa best = Isa::Scalar;
  if (isa_available(Isa::Avx2)) best = Isa::Avx2;
  if (isa_available(Isa::Neon)) best = Isa::Neon;
  if (const char* env = std::getenv("OSEQL_KERNELS")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (want == to_string(isa) && isa_available(isa)) return isa;
    }
  }
  return best;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = resolve_isa();
  return isa;
}

const KernelTable& active() { return table(active_isa()); }

void outside_fences(std::span<const double> x, double lo, double hi,
                    std::span<std::uint8_t> mask) {
  if (mask.size() != x.size()) throw InvalidArgument("mask size mismatch");
  active().outside_fences(x.data(), x.size(), lo, hi, mask.data());
}

void sq_distance_exceeds(std::span<const double> x, double loc, double limit,
                         std::span<std::uint8_t> mask) {
  if (mask.size() != x.size()) throw InvalidArgument("mask size mismatch");
  active().sq_distance_exceeds(x.data(), x.size(), loc, limit, mask.data());
}

void window_moments(std::span<const double> sorted, std::size_t h,
                    std::span<double> means, std::span<double> variances) {
  if (h == 0 || h > sorted.size()) {
    throw InvalidArgument("window size out of range");
  }
  const std::size_t windows = sorted.size() - h + 1;
  if (means.size() != windows || variances.size() != windows) {
    throw InvalidArgument("window output size mismatch");
  }
  active().window_moments(sorted.data(), sorted.size(), h, means.data(),
                          variances.data());
}

}  // namespace oseql::kernels
