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

#ifndef QNOISE_SAMPLER_HPP
#define QNOISE_SAMPLER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/homodyne.hpp"
#include "qnoise/interferometer.hpp"

namespace qnoise {

/// Samples per independently seeded chunk. Part of the determinism contract:
/// output depends on (seed, config) only, never on the thread count.
inline constexpr std::size_t kChunkSamples = 65536;

struct SamplerConfig {
    std::uint64_t seed = 1;
    double sample_rate = 20e9;       // Hz
    std::size_t n_samples = 1 << 20;
    double sigma2_vac = 0.25;        // variance of each vacuum quadrature
    std::optional<double> rin_dbhz;  // one-sided fractional RIN, dB/Hz; empty = off
    double rin_bandwidth = 1e9;      // Hz, noise-equivalent bandwidth of the RIN

    /// Throws Error(Config) on an invalid field.
    void validate() const;
};

/// Uniformly sampled difference-current record.
struct NoiseTimeSeries {
    std::vector<double> samples;
    double sample_rate = 1.0;
    std::uint64_t seed = 0;
    std::string label;
    /// Sum photocurrent j1 + j2 on the same time grid, in the same units as
    /// `samples`. Empty when not generated; consumed by the detector model to
    /// emulate common-mode leakage.
    std::vector<double> common_mode;

    std::size_t size() const { return samples.size(); }
    double mean() const;
    /// Unbiased sample variance.
    double variance() const;
};

/// i.i.d. (x, y) pairs with variance sigma2_vac each, deterministic in seed.
std::vector<QuadratureSample> sample_vacuum(const SamplerConfig &config);

/// LO intensity stream mean*(1 + delta(t)); delta is Gaussian, low-pass
/// filtered white noise whose one-sided PSD is rin_dbhz below rin_bandwidth.
std::vector<double> sample_lo_intensity(const SamplerConfig &config, double mean_intensity);

/// Per-sample difference current for the given interferometer and LO. The LO
/// intensity follows sample_lo_intensity; its phase is held fixed.
NoiseTimeSeries generate_timeseries(const InterferometerConfig &interferometer, const LocalOscillator &lo,
                                    const SamplerConfig &sampler);

}  // namespace qnoise

#endif
