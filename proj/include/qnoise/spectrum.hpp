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

#ifndef QNOISE_SPECTRUM_HPP
#define QNOISE_SPECTRUM_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "qnoise/sampler.hpp"

namespace qnoise {

enum class Window { Rectangular, Hann };
enum class Detrend { None, Mean };

Window parse_window(std::string_view name);
const char *window_name(Window window);

struct PsdOptions {
    std::size_t segment_length = 4096;
    Window window = Window::Hann;
    /// Fraction of a segment shared with the next one.
    double overlap = 0.5;
    Detrend detrend = Detrend::None;
};

/// One-sided spectral density. power is in (series units)^2 / Hz.
struct PsdEstimate {
    std::vector<double> frequencies;
    std::vector<double> power;
    std::size_t n_averages = 0;

    double resolution() const { return frequencies.size() > 1 ? frequencies[1] - frequencies[0] : 0.0; }
    /// Sum of power * df over bins with f_lo <= f <= f_hi.
    double band_power(double f_lo, double f_hi) const;
    /// Sum of power * df over every bin.
    double total_power() const;
};

/// Welch averaged periodogram. Throws Error(InvalidArgument) when the segment
/// is longer than the series or shorter than 2 samples.
PsdEstimate estimate_psd(const NoiseTimeSeries &series, const PsdOptions &options);

/// Real-to-complex forward transform of `in`; returns n/2 + 1 bins.
std::vector<std::complex<double>> real_fft(std::span<const double> in);
/// Inverse of real_fft for a length-n signal, normalized so that
/// inverse_real_fft(real_fft(x), n) == x.
std::vector<double> inverse_real_fft(std::span<const std::complex<double>> bins, std::size_t n);

}  // namespace qnoise

#endif
