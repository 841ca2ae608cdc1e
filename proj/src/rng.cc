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

#include "stablearn/rng.h"

#include <algorithm>
#include <stdexcept>

namespace stablearn {

uint64_t mix_seed(uint64_t seed, uint64_t index) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform_unit(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t uniform_below(Rng &rng, uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_below: bound must be positive");
    }
    // Rejection sampling keeps the draw unbiased for any bound.
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    while (true) {
        uint64_t r = rng();
        if (r < limit) {
            return r % bound;
        }
    }
}

size_t sample_from_cdf(std::span<const double> cdf, double u) {
    if (cdf.empty() || !(cdf.back() > 0)) {
        throw std::invalid_argument("sample_from_cdf: empty or zero-mass table");
    }
    double target = u * cdf.back();
    // upper_bound never lands on a zero-probability entry.
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it != cdf.end()) {
        return static_cast<size_t>(it - cdf.begin());
    }
    size_t i = cdf.size() - 1;
    while (i > 0 && cdf[i] == cdf[i - 1]) {
        --i;
    }
    return i;
}

}  // namespace stablearn
