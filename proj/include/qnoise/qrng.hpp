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

#ifndef QNOISE_QRNG_HPP
#define QNOISE_QRNG_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qnoise/sampler.hpp"

namespace qnoise {

struct AdcConfig {
    int bits = 8;
    double full_scale_sigma = 4.0;  // clip at +-k sigma

    void validate() const;
    std::uint32_t levels() const { return std::uint32_t{1} << bits; }
};

struct QuantizedSeries {
    std::vector<std::uint32_t> codes;
    AdcConfig adc;
    double sigma = 0.0;        // input standard deviation used for scaling
    double min_entropy = 0.0;  // bits per code
};

/// Mid-rise uniform quantizer over [-k sigma, +k sigma] with 2^bits codes:
/// code = floor(x / step) + 2^(bits-1), clamped to [0, 2^bits - 1]. An input
/// on a step boundary goes to the upper code, so 0 maps to 2^(bits-1).
/// Throws Error(InvalidArgument) for an empty or zero-variance series.
QuantizedSeries quantize(const NoiseTimeSeries &series, const AdcConfig &adc);

/// -log2 of the largest code probability for a zero-mean Gaussian input of
/// standard deviation `sigma`, in units where the quantizer spans
/// [-full_scale_sigma, +full_scale_sigma]. End codes absorb the tails.
double min_entropy(const AdcConfig &adc, double sigma = 1.0);

/// Packed bit array, most significant bit first within each byte.
class BitStream {
   public:
    BitStream() = default;
    explicit BitStream(std::size_t n_bits);

    std::size_t size() const { return n_bits_; }
    bool get(std::size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u; }
    void set(std::size_t i, bool value);
    const std::vector<std::uint8_t> &bytes() const { return bytes_; }
    std::size_t count_ones() const;

    BitStream operator^(const BitStream &rhs) const;
    bool operator==(const BitStream &rhs) const = default;

    double source_min_entropy = 0.0;  // bits per raw sample
    double extraction_ratio = 1.0;    // output bits / raw bits

   private:
    std::vector<std::uint8_t> bytes_;
    std::size_t n_bits_ = 0;
};

/// Raw bits of each code, most significant bit first.
BitStream raw_bits(const QuantizedSeries &codes);

/// Largest admissible extraction ratio: min_entropy / bits.
double entropy_bound(const QuantizedSeries &codes);

inline constexpr std::size_t kDefaultBlockBits = 1024;

/// Seeded Toeplitz hashing over GF(2). The raw bits are cut into blocks of
/// block_bits; block j yields floor(ratio*end_j) - floor(ratio*start_j)
/// output bits so the total is floor(ratio * raw bits). One Toeplitz matrix,
/// drawn from the seed, is shared by all blocks.
BitStream toeplitz_hash(const BitStream &raw, double ratio, std::uint64_t seed,
                        std::size_t block_bits = kDefaultBlockBits);

/// Extraction with the entropy bound enforced: throws Error(InvalidArgument)
/// when ratio exceeds entropy_bound(codes).
BitStream extract(const QuantizedSeries &codes, double ratio, std::uint64_t seed,
                  std::size_t block_bits = kDefaultBlockBits);

struct RandomnessReport {
    std::size_t n_bits = 0;
    double monobit_z = 0.0;
    double runs_z = 0.0;
    double autocorrelation_z = 0.0;
    double threshold = 3.29;
    bool monobit_pass = false;
    bool runs_pass = false;
    bool autocorrelation_pass = false;
    bool passed() const { return monobit_pass && runs_pass && autocorrelation_pass; }
};

inline constexpr std::size_t kMinCheckBits = 100000;

/// Monobit, Wald-Wolfowitz runs and lag-1 autocorrelation z-scores. Throws
/// Error(InvalidArgument) below kMinCheckBits bits.
RandomnessReport randomness_checks(const BitStream &stream);

}  // namespace qnoise

#endif
