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

#include <cstdint>
#include <string_view>

namespace oseql {

// Stable 64-bit content hash (FNV-1a). Unlike std::hash it is identical across
// platforms and library versions, which keeps seeded runs reproducible.
std::uint64_t fnv1a64(std::string_view bytes);

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t hash_with_seed(std::string_view bytes, std::uint64_t seed);

// Maps a hash to [0, 1) using the top 53 bits.
double unit_interval(std::uint64_t h);

}  // namespace oseql
