// Copyright 2026 The stablearn Authors
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

#ifndef STABLEARN_RNG_H
#define STABLEARN_RNG_H

#include <cstdint>
#include <random>
#include <span>

namespace stablearn {

using Rng = std::mt19937_64;

/// splitmix64 finalizer applied to (seed, index); used for per-trial and per-stream seeds.
uint64_t mix_seed(uint64_t seed, uint64_t index);

/// Uniform double in [0, 1) from one 64-bit draw (top 53 bits).
double uniform_unit(Rng &rng);

/// Uniform integer in [0, bound).
uint64_t uniform_below(Rng &rng, uint64_t bound);

/// Inverse-CDF lookup: smallest i with u < cdf[i]. `cdf` must be non-decreasing with a
/// positive last entry; u is scaled by the last entry so unnormalized tables work.
size_t sample_from_cdf(std::span<const double> cdf, double u);

}  // namespace stablearn

#endif
