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

#ifndef QNOISE_RNG_HPP
#define QNOISE_RNG_HPP

#include <cstdint>
#include <random>

namespace qnoise {

/// SplitMix64 finalizer. Used to derive independent stream and chunk seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for chunk `chunk` of stream `stream` under a user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk);

/// Named stream tags. Changing these changes every golden output.
namespace streams {
inline constexpr std::uint64_t kVacuum = 0x7661637575ULL;        // "vacuu"
inline constexpr std::uint64_t kRin = 0x72696eULL;               // "rin"
inline constexpr std::uint64_t kElectronic = 0x656c6563ULL;      // "elec"
inline constexpr std::uint64_t kController = 0x6f7063ULL;        // "opc"
inline constexpr std::uint64_t kExtractor = 0x746f65706cULL;     // "toepl"
}  // namespace streams

/// Portable Gaussian source: mt19937_64 bits, 53-bit uniforms and the
/// Marsaglia polar transform. Output is bit-identical on every conforming
/// platform with an IEEE-754 libm.
class GaussianSource {
   public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform();
    /// Standard normal.
    double normal();
    /// Two independent standard normals from a single polar draw.
    void normal_pair(double &a, double &b);
    std::uint64_t bits() { return engine_(); }

   private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qnoise

#endif
