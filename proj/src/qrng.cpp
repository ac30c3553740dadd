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

#include "qnoise/qrng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qnoise/error.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

void AdcConfig::validate() const {
    if (bits < 1 || bits > 24) {
        throw Error(ErrorCode::Config, "adc: bits must lie in [1, 24]");
    }
    if (!(full_scale_sigma > 0.0 && std::isfinite(full_scale_sigma))) {
        throw Error(ErrorCode::Config, "adc: full_scale_sigma must be positive");
    }
}

QuantizedSeries quantize(const NoiseTimeSeries &series, const AdcConfig &adc) {
    adc.validate();
    if (series.samples.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cannot quantize an empty series");
    }
    const double sigma = std::sqrt(series.variance());
    if (!(sigma > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "cannot quantize a zero-variance series (sigma-relative scale undefined)");
    }
    QuantizedSeries q;
    q.adc = adc;
    q.sigma = sigma;
    q.min_entropy = min_entropy(adc);
    const auto levels = static_cast<std::int64_t>(adc.levels());
    const double step = 2 * adc.full_scale_sigma * sigma / static_cast<double>(levels);
    q.codes.reserve(series.samples.size());
    for (double x : series.samples) {
        const auto raw = static_cast<std::int64_t>(std::floor(x / step)) + levels / 2;
        q.codes.push_back(static_cast<std::uint32_t>(std::clamp<std::int64_t>(raw, 0, levels - 1)));
    }
    return q;
}

double min_entropy(const AdcConfig &adc, double sigma) {
    adc.validate();
    if (!(sigma > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "min_entropy needs sigma > 0");
    }
    // For a centred unimodal density the heaviest code is either a bin
    // adjacent to zero or an end bin carrying its tail.
    const double k = adc.full_scale_sigma;
    const double width = 2 * k / static_cast<double>(adc.levels());
    const double scale = sigma * std::numbers::sqrt2;
    const double central = 0.5 * std::erf(width / scale);
    const double end = 0.5 * std::erfc((k - width) / scale);
    return -std::log2(std::max(central, end));
}

BitStream::BitStream(std::size_t n_bits) : bytes_((n_bits + 7) / 8, 0), n_bits_(n_bits) {}

void BitStream::set(std::size_t i, bool value) {
    const auto mask = static_cast<std::uint8_t>(0x80u >> (i & 7));
    if (value) {
        bytes_[i >> 3] |= mask;
    } else {
        bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }
}

std::size_t BitStream::count_ones() const {
    std::size_t ones = 0;
    for (auto b : bytes_) {
        ones += static_cast<std::size_t>(std::popcount(b));
    }
    return ones;
}

BitStream BitStream::operator^(const BitStream &rhs) const {
    if (rhs.n_bits_ != n_bits_) {
        throw Error(ErrorCode::InvalidArgument, "xor of bit streams with different lengths");
    }
    BitStream out = *this;
    for (std::size_t i = 0; i < bytes_.size(); ++i) {
        out.bytes_[i] ^= rhs.bytes_[i];
    }
    return out;
}

BitStream raw_bits(const QuantizedSeries &codes) {
    const int bits = codes.adc.bits;
    BitStream out(codes.codes.size() * static_cast<std::size_t>(bits));
    std::size_t pos = 0;
    for (std::uint32_t c : codes.codes) {
        for (int b = bits - 1; b >= 0; --b) {
            out.set(pos++, (c >> b) & 1u);
        }
    }
    out.source_min_entropy = codes.min_entropy;
    return out;
}

double entropy_bound(const QuantizedSeries &codes) { return codes.min_entropy / codes.adc.bits; }

namespace {

// Bits stored least-significant-first in 64-bit words.
class WordBits {
   public:
    explicit WordBits(std::size_t n) : words_((n + 63) / 64 + 1, 0) {}
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }
    // 64 bits starting at bit i.
    std::uint64_t window(std::size_t i) const {
        const std::size_t q = i >> 6, r = i & 63;
        if (r == 0) {
            return words_[q];
        }
        return (words_[q] >> r) | (words_[q + 1] << (64 - r));
    }
    std::uint64_t word(std::size_t k) const { return words_[k]; }

   private:
    std::vector<std::uint64_t> words_;
};

std::size_t floor_scaled(double ratio, std::size_t n) {
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
}

}  // namespace

BitStream toeplitz_hash(const BitStream &raw, double ratio, std::uint64_t seed, std::size_t block_bits) {
    if (!(ratio > 0.0 && ratio <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "extraction ratio must lie in (0, 1]");
    }
    if (block_bits < 1) {
        throw Error(ErrorCode::InvalidArgument, "block_bits must be positive");
    }
    const std::size_t n = raw.size();
    BitStream out(floor_scaled(ratio, n));
    out.source_min_entropy = raw.source_min_entropy;
    out.extraction_ratio = ratio;
    if (n == 0) {
        return out;
    }

    std::size_t rows_max = 0;
    for (std::size_t start = 0; start < n; start += block_bits) {
        const std::size_t end = std::min(n, start + block_bits);
        rows_max = std::max(rows_max, floor_scaled(ratio, end) - floor_scaled(ratio, start));
    }
    // T[i][j] = t[i - j + block_bits - 1]: rows_max + block_bits - 1 seed bits.
    const std::size_t t_len = rows_max + block_bits - 1;
    WordBits t(t_len + 64);
    {
        GaussianSource rng(derive_seed(seed, streams::kExtractor, 0));
        for (std::size_t i = 0; i < t_len; i += 64) {
            const std::uint64_t w = rng.bits();
            for (std::size_t b = 0; b < 64 && i + b < t_len; ++b) {
                if ((w >> b) & 1u) {
                    t.set(i + b);
                }
            }
        }
    }

    // Row i of T dotted with the block equals the dot product of the seed
    // window starting at i with the block reversed (zero padded at the end).
    const std::size_t words = (block_bits + 63) / 64;
    WordBits reversed(block_bits);
    std::size_t out_pos = 0;
    for (std::size_t start = 0; start < n; start += block_bits) {
        const std::size_t end = std::min(n, start + block_bits);
        const std::size_t rows = floor_scaled(ratio, end) - floor_scaled(ratio, start);
        reversed.clear();
        for (std::size_t j = start; j < end; ++j) {
            if (raw.get(j)) {
                reversed.set(block_bits - 1 - (j - start));
            }
        }
        for (std::size_t i = 0; i < rows; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < words; ++k) {
                acc ^= t.window(i + 64 * k) & reversed.word(k);
            }
            out.set(out_pos++, std::popcount(acc) & 1);
        }
    }
    return out;
}

BitStream extract(const QuantizedSeries &codes, double ratio, std::uint64_t seed, std::size_t block_bits) {
    const double bound = entropy_bound(codes);
    if (ratio > bound) {
        throw Error(ErrorCode::InvalidArgument, "extraction ratio " + std::to_string(ratio) +
                                                    " exceeds the min-entropy bound " + std::to_string(bound));
    }
    BitStream out = toeplitz_hash(raw_bits(codes), ratio, seed, block_bits);
    out.source_min_entropy = codes.min_entropy;
    return out;
}

RandomnessReport randomness_checks(const BitStream &stream) {
    const std::size_t n = stream.size();
    if (n < kMinCheckBits) {
        throw Error(ErrorCode::InvalidArgument, "randomness checks need at least " + std::to_string(kMinCheckBits) +
                                                    " bits, got " + std::to_string(n));
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    RandomnessReport r;
    r.n_bits = n;
    const auto nd = static_cast<double>(n);
    const auto ones = static_cast<double>(stream.count_ones());
    const double zeros = nd - ones;
    r.monobit_z = (2 * ones - nd) / std::sqrt(nd);

    std::size_t runs = 1;
    for (std::size_t i = 1; i < n; ++i) {
        runs += stream.get(i) != stream.get(i - 1);
    }
    if (ones == 0 || zeros == 0) {
        r.runs_z = inf;
        r.autocorrelation_z = inf;
    } else {
        const double mu = 2 * ones * zeros / nd + 1;
        const double var = (mu - 1) * (mu - 2) / (nd - 1);
        r.runs_z = (static_cast<double>(runs) - mu) / std::sqrt(var);

        const double m = ones / nd;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = (stream.get(i) ? 1.0 : 0.0) - m;
            den += d * d;
            if (i + 1 < n) {
                num += d * ((stream.get(i + 1) ? 1.0 : 0.0) - m);
            }
        }
        r.autocorrelation_z = num / den * std::sqrt(nd);
    }
    r.monobit_pass = std::abs(r.monobit_z) < r.threshold;
    r.runs_pass = std::abs(r.runs_z) < r.threshold;
    r.autocorrelation_pass = std::abs(r.autocorrelation_z) < r.threshold;
    return r;
}

}  // namespace qnoise
