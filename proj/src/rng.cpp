// Copyright 2026 The qnoise Authors
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

#include "qnoise/rng.hpp"

#include <cmath>

namespace qnoise {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
    return mix64(mix64(mix64(seed) ^ stream) ^ chunk);
}

double GaussianSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

void GaussianSource::normal_pair(double &a, double &b) {
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    a = u * f;
    b = v * f;
}

double GaussianSource::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double a, b;
    normal_pair(a, b);
    spare_ = b;
    has_spare_ = true;
    return a;
}

}  // namespace qnoise
