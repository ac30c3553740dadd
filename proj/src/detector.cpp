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

#include "qnoise/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "qnoise/error.hpp"
#include "qnoise/rng.hpp"
#include "qnoise/spectrum.hpp"

namespace qnoise {

namespace {

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw Error(ErrorCode::Config, "detector: " + what);
    }
}

double electronic_psd(const BalancedDetectorConfig &det) {
    if (!det.electronic_noise_dbm_hz) {
        return 0.0;
    }
    return std::pow(10.0, *det.electronic_noise_dbm_hz / 10.0) * 1e-3;
}

// Single-pole response of one photodiode.
std::complex<double> diode_response(double f, const PhotodiodeParams &d) {
    return 1.0 / std::complex<double>(1.0, f / d.bandwidth);
}

}  // namespace

void PhotodiodeParams::validate() const {
    require(responsivity >= 0.0 && std::isfinite(responsivity), "responsivity must be non-negative");
    require(dark_current >= 0.0 && std::isfinite(dark_current), "dark_current must be non-negative");
    require(saturation_current > 0.0 && std::isfinite(saturation_current), "saturation_current must be positive");
    require(bandwidth > 0.0 && std::isfinite(bandwidth), "bandwidth must be positive");
}

std::vector<std::string> PhotodiodeParams::warnings() const {
    std::vector<std::string> out;
    if (responsivity > kResponsivityWarningThreshold) {
        std::ostringstream msg;
        msg << "responsivity " << responsivity << " A/W exceeds the unit quantum efficiency bound ("
            << kResponsivityWarningThreshold << " A/W at 1550 nm)";
        out.push_back(msg.str());
    }
    return out;
}

void BalancedDetectorConfig::validate() const {
    diode_a.validate();
    diode_b.validate();
    require(load_resistance > 0.0 && std::isfinite(load_resistance), "load_resistance must be positive");
    require(transfer_cutoff > 0.0 && std::isfinite(transfer_cutoff), "transfer_cutoff must be positive");
    require(transfer_order >= 1 && transfer_order <= 16, "transfer_order must lie in [1, 16]");
    require(!electronic_noise_dbm_hz || std::isfinite(*electronic_noise_dbm_hz),
            "electronic_noise_dbm_hz must be finite");
    require(balance_mismatch >= 0.0 && std::isfinite(balance_mismatch), "balance_mismatch must be non-negative");
    require(std::isfinite(delay_mismatch), "delay_mismatch must be finite");
    require(cmrr_ceiling_db > 0.0 && clearance_ceiling_db > 0.0, "dB ceilings must be positive");
}

std::vector<std::string> BalancedDetectorConfig::warnings() const {
    std::vector<std::string> out = diode_a.warnings();
    for (auto &w : diode_b.warnings()) {
        out.push_back(std::move(w));
    }
    return out;
}

double BalancedDetectorConfig::mean_responsivity() const {
    return 0.5 * (diode_a.responsivity + diode_b.responsivity);
}

double BalancedDetectorConfig::saturation_current() const {
    return std::min(diode_a.saturation_current, diode_b.saturation_current);
}

double BalancedDetectorConfig::gain_mismatch() const {
    const double mean = mean_responsivity();
    const double resp = mean > 0.0 ? (diode_a.responsivity - diode_b.responsivity) / mean : 0.0;
    return resp + balance_mismatch;
}

std::complex<double> transfer_function(double f, const BalancedDetectorConfig &det) {
    // Normalized Butterworth poles p_k = exp(i pi (2k + n - 1) / 2n); their
    // product times (-1)^n is 1, so H(s) = prod (-p_k) / (s - p_k).
    const int n = det.transfer_order;
    const std::complex<double> s(0.0, f / det.transfer_cutoff);
    std::complex<double> h(1.0, 0.0);
    for (int k = 1; k <= n; ++k) {
        const std::complex<double> p = std::polar(1.0, std::numbers::pi * (2.0 * k + n - 1) / (2.0 * n));
        h *= -p / (s - p);
    }
    return h;
}

double shot_noise_psd(double f, double p_opt, const BalancedDetectorConfig &det) {
    if (!(p_opt >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "optical power must be non-negative");
    }
    return 2 * kElementaryCharge * p_opt * det.mean_responsivity() * det.load_resistance *
           std::norm(transfer_function(f, det));
}

double floor_psd(double f, const BalancedDetectorConfig &det) {
    const double dark = det.diode_a.dark_current + det.diode_b.dark_current;
    return electronic_psd(det) +
           2 * kElementaryCharge * dark * det.load_resistance * std::norm(transfer_function(f, det));
}

UnitBridge calibrate_units(double p_opt, double responsivity, double sample_rate) {
    if (!(p_opt >= 0.0) || !(responsivity >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "optical power and responsivity must be non-negative");
    }
    if (!(sample_rate > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "unit calibration needs sample_rate > 0");
    }
    // DC:    kappa * I_LO                                 = A P
    // noise: kappa^2 * (4 sigma2 I_LO) * (2 / fs), s2=1/4 = 2 q A P
    UnitBridge bridge;
    bridge.amperes_per_unit = kElementaryCharge * sample_rate;
    bridge.lo_intensity = responsivity * p_opt / bridge.amperes_per_unit;
    return bridge;
}

NoiseTimeSeries scale_series(const NoiseTimeSeries &series, double amperes_per_unit) {
    NoiseTimeSeries out = series;
    for (auto &v : out.samples) {
        v *= amperes_per_unit;
    }
    for (auto &v : out.common_mode) {
        v *= amperes_per_unit;
    }
    return out;
}

DetectorOutput apply_detector(const NoiseTimeSeries &series, const BalancedDetectorConfig &det) {
    det.validate();
    DetectorOutput result;
    result.warnings = det.warnings();
    const std::size_t n = series.size();
    const double fs = series.sample_rate;
    if (fs < 2 * det.transfer_cutoff) {
        std::ostringstream msg;
        msg << "sample rate " << fs << " Hz is below twice the detector cutoff; the response aliases";
        result.warnings.push_back(msg.str());
    }

    std::vector<double> x = series.samples;
    const double leak = 0.5 * det.gain_mismatch();
    if (leak != 0.0 && series.common_mode.size() == n) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += leak * series.common_mode[i];
        }
    }
    GaussianSource noise(derive_seed(series.seed, streams::kElectronic, 0));
    const double dark = det.diode_a.dark_current + det.diode_b.dark_current;
    if (dark > 0.0) {
        const double sigma = std::sqrt(2 * kElementaryCharge * dark * fs / 2);
        for (auto &v : x) {
            v += sigma * noise.normal();
        }
    }

    if (n > 1) {
        std::vector<std::complex<double>> bins = real_fft(x);
        for (std::size_t k = 0; k < bins.size(); ++k) {
            bins[k] *= transfer_function(static_cast<double>(k) * fs / static_cast<double>(n), det);
        }
        x = inverse_real_fft(bins, n);
    }

    const double floor = electronic_psd(det) / det.load_resistance;  // A^2/Hz
    if (floor > 0.0) {
        const double sigma = std::sqrt(floor * fs / 2);
        for (auto &v : x) {
            v += sigma * noise.normal();
        }
    }

    const double sat = det.saturation_current();
    for (auto &v : x) {
        if (v > sat || v < -sat) {
            v = std::clamp(v, -sat, sat);
            ++result.clipped_samples;
        }
    }
    if (result.clipped_samples > 0) {
        result.warnings.push_back(std::to_string(result.clipped_samples) + " samples clipped at saturation");
    }

    result.series = series;
    result.series.samples = std::move(x);
    result.series.common_mode.clear();
    result.series.label = series.label + " | detector";
    return result;
}

double cmrr(double f, const BalancedDetectorConfig &det) {
    const double m = det.gain_mismatch();
    const double half_delay = std::numbers::pi * f * det.delay_mismatch;
    const std::complex<double> ga = (1 + m / 2) * diode_response(f, det.diode_a) * std::polar(1.0, -half_delay);
    const std::complex<double> gb = (1 - m / 2) * diode_response(f, det.diode_b) * std::polar(1.0, half_delay);
    const double residual = std::abs(ga - gb);
    const double differential = std::abs(ga + gb);
    if (residual == 0.0) {
        return det.cmrr_ceiling_db;
    }
    return std::min(det.cmrr_ceiling_db, 20 * std::log10(differential / residual));
}

ClearanceReport clearance(double p_opt, const BalancedDetectorConfig &det, std::span<const double> frequencies,
                          double threshold_db) {
    if (!(p_opt > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "clearance needs a positive optical power");
    }
    det.validate();
    auto clearance_at = [&](double f, double &nq, double &nf) {
        nq = shot_noise_psd(f, p_opt, det);
        nf = floor_psd(f, det);
        if (nf == 0.0) {
            return det.clearance_ceiling_db;
        }
        return std::min(det.clearance_ceiling_db, 10 * std::log10(1 + nq / nf));
    };

    ClearanceReport report;
    report.threshold_db = threshold_db;
    for (double f : frequencies) {
        double nq, nf;
        const double c = clearance_at(f, nq, nf);
        report.frequencies.push_back(f);
        report.quantum_psd.push_back(nq);
        report.floor_psd.push_back(nf);
        report.clearance_db.push_back(c);
    }
    if (report.frequencies.empty() || report.clearance_db.front() < threshold_db) {
        return report;
    }
    const auto below = std::find_if(report.clearance_db.begin(), report.clearance_db.end(),
                                    [&](double c) { return c < threshold_db; });
    if (below == report.clearance_db.end()) {
        report.band_limit_hz = report.frequencies.back();
        return report;
    }
    // Refine the crossing between the last passing and the first failing point.
    const auto i = static_cast<std::size_t>(below - report.clearance_db.begin());
    double lo = report.frequencies[i - 1], hi = report.frequencies[i];
    for (int iter = 0; iter < 100 && hi - lo > 1e-9 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        double nq, nf;
        (clearance_at(mid, nq, nf) >= threshold_db ? lo : hi) = mid;
    }
    report.band_limit_hz = lo;
    return report;
}

}  // namespace qnoise
