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

#include "qnoise/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "qnoise/error.hpp"

namespace qnoise {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

class RealForwardPlan {
   public:
    explicit RealForwardPlan(std::size_t n) : n_(n) {
        in_ = fftw_alloc_real(n);
        out_ = fftw_alloc_complex(n / 2 + 1);
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
    }
    ~RealForwardPlan() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }
    RealForwardPlan(const RealForwardPlan &) = delete;
    RealForwardPlan &operator=(const RealForwardPlan &) = delete;

    double *input() { return in_; }
    const fftw_complex *output() const { return out_; }
    std::size_t bins() const { return n_ / 2 + 1; }
    void execute() { fftw_execute(plan_); }

   private:
    std::size_t n_;
    double *in_ = nullptr;
    fftw_complex *out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

std::vector<double> make_window(Window window, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (window == Window::Hann) {
        // Periodic Hann.
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 0.5 * (1.0 - std::cos(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
        }
    }
    return w;
}

}  // namespace

Window parse_window(std::string_view name) {
    if (name == "hann") {
        return Window::Hann;
    }
    if (name == "rectangular") {
        return Window::Rectangular;
    }
    throw Error(ErrorCode::Config, "unknown window '" + std::string(name) + "' (expected hann or rectangular)");
}

const char *window_name(Window window) { return window == Window::Hann ? "hann" : "rectangular"; }

double PsdEstimate::band_power(double f_lo, double f_hi) const {
    const double df = resolution();
    double acc = 0.0;
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
        if (frequencies[k] >= f_lo && frequencies[k] <= f_hi) {
            acc += power[k];
        }
    }
    return acc * df;
}

double PsdEstimate::total_power() const {
    double acc = 0.0;
    for (double p : power) {
        acc += p;
    }
    return acc * resolution();
}

std::vector<std::complex<double>> real_fft(std::span<const double> in) {
    RealForwardPlan plan(in.size());
    std::copy(in.begin(), in.end(), plan.input());
    plan.execute();
    std::vector<std::complex<double>> out(plan.bins());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = {plan.output()[k][0], plan.output()[k][1]};
    }
    return out;
}

std::vector<double> inverse_real_fft(std::span<const std::complex<double>> bins, std::size_t n) {
    if (bins.size() != n / 2 + 1) {
        throw Error(ErrorCode::InvalidArgument, "inverse_real_fft: expected n/2+1 bins");
    }
    fftw_complex *in = fftw_alloc_complex(bins.size());
    double *out = fftw_alloc_real(n);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < bins.size(); ++k) {
        in[k][0] = bins[k].real();
        in[k][1] = bins[k].imag();
    }
    fftw_execute(plan);
    std::vector<double> result(out, out + n);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto &v : result) {
        v *= scale;
    }
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return result;
}

PsdEstimate estimate_psd(const NoiseTimeSeries &series, const PsdOptions &options) {
    const std::size_t n = series.size();
    const std::size_t len = options.segment_length;
    if (len < 2) {
        throw Error(ErrorCode::InvalidArgument, "segment_length must be at least 2");
    }
    if (len > n) {
        throw Error(ErrorCode::InvalidArgument, "segment_length " + std::to_string(len) +
                                                    " exceeds series length " + std::to_string(n));
    }
    if (!(options.overlap >= 0.0 && options.overlap < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "overlap must lie in [0, 1)");
    }
    if (!(series.sample_rate > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "series sample_rate must be positive");
    }

    const std::vector<double> w = make_window(options.window, len);
    double w2 = 0.0;
    for (double v : w) {
        w2 += v * v;
    }
    const auto shared = static_cast<std::size_t>(std::llround(options.overlap * static_cast<double>(len)));
    const std::size_t hop = std::max<std::size_t>(1, len - shared);

    RealForwardPlan plan(len);
    std::vector<double> acc(plan.bins(), 0.0);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + len <= n; start += hop) {
        double offset = 0.0;
        if (options.detrend == Detrend::Mean) {
            for (std::size_t i = 0; i < len; ++i) {
                offset += series.samples[start + i];
            }
            offset /= static_cast<double>(len);
        }
        double *in = plan.input();
        for (std::size_t i = 0; i < len; ++i) {
            in[i] = (series.samples[start + i] - offset) * w[i];
        }
        plan.execute();
        for (std::size_t k = 0; k < acc.size(); ++k) {
            const double re = plan.output()[k][0], im = plan.output()[k][1];
            acc[k] += re * re + im * im;
        }
        ++segments;
    }

    PsdEstimate est;
    est.n_averages = segments;
    est.frequencies.resize(acc.size());
    est.power.resize(acc.size());
    const double norm = 1.0 / (static_cast<double>(segments) * series.sample_rate * w2);
    for (std::size_t k = 0; k < acc.size(); ++k) {
        est.frequencies[k] = static_cast<double>(k) * series.sample_rate / static_cast<double>(len);
        const bool edge = k == 0 || (len % 2 == 0 && k == len / 2);
        est.power[k] = acc[k] * norm * (edge ? 1.0 : 2.0);
    }
    return est;
}

}  // namespace qnoise
