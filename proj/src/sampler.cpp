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

#include "qnoise/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <span>
#include <sstream>
#include <thread>

#include "qnoise/error.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

namespace {

std::size_t chunk_count(std::size_t n) { return (n + kChunkSamples - 1) / kChunkSamples; }

// Runs fn(chunk_index, begin, end) for every chunk, spread over worker
// threads. fn must only touch [begin, end) of shared outputs.
template <class Fn>
void for_each_chunk(std::size_t n, Fn &&fn) {
    const std::size_t chunks = chunk_count(n);
    const std::size_t workers =
        std::min<std::size_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
    auto run = [&](std::atomic<std::size_t> &next) {
        for (std::size_t c = next++; c < chunks; c = next++) {
            const std::size_t begin = c * kChunkSamples;
            fn(c, begin, std::min(n, begin + kChunkSamples));
        }
    };
    std::atomic<std::size_t> next{0};
    if (workers <= 1) {
        run(next);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] { run(next); });
    }
}

void fill_vacuum(std::uint64_t seed, std::size_t chunk, double sigma, std::span<QuadratureSample> out) {
    GaussianSource g(derive_seed(seed, streams::kVacuum, chunk));
    for (auto &s : out) {
        double a, b;
        g.normal_pair(a, b);
        s = {sigma * a, sigma * b};
    }
}

// Fractional RIN delta(t) for n samples, or empty when RIN is off.
std::vector<double> rin_fraction(const SamplerConfig &config) {
    if (!config.rin_dbhz) {
        return {};
    }
    const std::size_t n = config.n_samples;
    const double density = std::pow(10.0, *config.rin_dbhz / 10.0);
    const double white_sigma = std::sqrt(density * config.sample_rate / 2);
    std::vector<double> w(n);
    for_each_chunk(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
        GaussianSource g(derive_seed(config.seed, streams::kRin, c));
        for (std::size_t i = begin; i < end; ++i) {
            w[i] = g.normal();
        }
    });
    const double ratio = 2 * config.rin_bandwidth / config.sample_rate;
    if (ratio >= 1.0) {
        for (auto &v : w) {
            v *= white_sigma;
        }
        return w;
    }
    // One-pole low-pass with unit DC gain. Its noise-equivalent bandwidth is
    // (fs/2)(1-a)/(1+a); solving for rin_bandwidth gives the pole below, so
    // the low-frequency PSD is `density` and the variance density*bandwidth.
    const double a = (1 - ratio) / (1 + ratio);
    const double b = (1 - a) * white_sigma;
    double y = std::sqrt(density * config.rin_bandwidth) * w[0];  // stationary start
    w[0] = y;
    for (std::size_t i = 1; i < n; ++i) {
        y = a * y + b * w[i];
        w[i] = y;
    }
    return w;
}

}  // namespace

void SamplerConfig::validate() const {
    if (!(sample_rate > 0.0 && std::isfinite(sample_rate))) {
        throw Error(ErrorCode::Config, "sampler: sample_rate must be positive");
    }
    if (n_samples < 1) {
        throw Error(ErrorCode::Config, "sampler: n_samples must be at least 1");
    }
    if (!(sigma2_vac >= 0.0 && std::isfinite(sigma2_vac))) {
        throw Error(ErrorCode::Config, "sampler: sigma2_vac must be non-negative");
    }
    if (rin_dbhz) {
        if (!std::isfinite(*rin_dbhz)) {
            throw Error(ErrorCode::Config, "sampler: rin_dbhz must be finite");
        }
        if (!(rin_bandwidth > 0.0 && std::isfinite(rin_bandwidth))) {
            throw Error(ErrorCode::Config, "sampler: rin_bandwidth must be positive");
        }
    }
}

double NoiseTimeSeries::mean() const {
    if (samples.empty()) {
        return 0.0;
    }
    return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double NoiseTimeSeries::variance() const {
    if (samples.size() < 2) {
        return 0.0;
    }
    const double m = mean();
    double acc = 0.0;
    for (double v : samples) {
        acc += (v - m) * (v - m);
    }
    return acc / static_cast<double>(samples.size() - 1);
}

std::vector<QuadratureSample> sample_vacuum(const SamplerConfig &config) {
    config.validate();
    std::vector<QuadratureSample> out(config.n_samples);
    const double sigma = std::sqrt(config.sigma2_vac);
    for_each_chunk(out.size(), [&](std::size_t c, std::size_t begin, std::size_t end) {
        fill_vacuum(config.seed, c, sigma, std::span(out).subspan(begin, end - begin));
    });
    return out;
}

std::vector<double> sample_lo_intensity(const SamplerConfig &config, double mean_intensity) {
    config.validate();
    if (!(mean_intensity >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "mean LO intensity must be non-negative");
    }
    std::vector<double> out(config.n_samples, mean_intensity);
    if (mean_intensity == 0.0) {
        return out;
    }
    const std::vector<double> delta = rin_fraction(config);
    for (std::size_t i = 0; i < delta.size(); ++i) {
        out[i] = std::max(0.0, mean_intensity * (1.0 + delta[i]));
    }
    return out;
}

NoiseTimeSeries generate_timeseries(const InterferometerConfig &interferometer, const LocalOscillator &lo,
                                    const SamplerConfig &sampler) {
    sampler.validate();
    const TransferMatrix u = compose_transfer(interferometer);
    const DifferenceCurrentCoefficients k = coeffs_from_transfer(u);
    // Same decomposition for j1 + j2.
    const double sum_lo = std::norm(u.u11) + std::norm(u.u21);
    const double sum_vac = std::norm(u.u12) + std::norm(u.u22);
    const Complex sum_cross = u.u11 * std::conj(u.u12) + u.u21 * std::conj(u.u22);

    const std::size_t n = sampler.n_samples;
    const std::vector<double> delta = lo.intensity() > 0.0 ? rin_fraction(sampler) : std::vector<double>{};
    const double sigma = std::sqrt(sampler.sigma2_vac);

    NoiseTimeSeries series;
    series.sample_rate = sampler.sample_rate;
    series.seed = sampler.seed;
    series.samples.resize(n);
    series.common_mode.resize(n);
    for_each_chunk(n, [&](std::size_t c, std::size_t begin, std::size_t end) {
        std::vector<QuadratureSample> vac(end - begin);
        fill_vacuum(sampler.seed, c, sigma, vac);
        for (std::size_t i = begin; i < end; ++i) {
            const QuadratureSample &s = vac[i - begin];
            LocalOscillator lo_i = lo;
            if (!delta.empty()) {
                lo_i = lo.with_intensity(std::max(0.0, lo.intensity() * (1.0 + delta[i])));
            }
            series.samples[i] = difference_current(k, lo_i, s);
            const Complex e = lo_i.amplitude();
            const Complex v{s.x, s.y};
            series.common_mode[i] =
                sum_lo * lo_i.intensity() + sum_vac * std::norm(v) + 2 * (sum_cross * e * std::conj(v)).real();
        }
    });

    std::ostringstream label;
    label << "mzi alpha1=" << interferometer.alpha1.alpha << " alpha2=" << interferometer.alpha2.alpha
          << " phi=" << interferometer.phi.canonical() << " eta=(" << interferometer.losses.eta1() << ","
          << interferometer.losses.eta2() << ") I_LO=" << lo.intensity() << " sigma2=" << sampler.sigma2_vac
          << " rin=" << (sampler.rin_dbhz ? std::to_string(*sampler.rin_dbhz) : std::string("off"));
    series.label = label.str();
    return series;
}

}  // namespace qnoise
