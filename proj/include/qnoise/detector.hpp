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

#ifndef QNOISE_DETECTOR_HPP
#define QNOISE_DETECTOR_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnoise/sampler.hpp"

namespace qnoise {

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

struct PhotodiodeParams {
    double responsivity = 0.78;       // A/W
    double dark_current = 0.5e-6;     // A
    double saturation_current = 30e-3;  // A
    double bandwidth = 10e9;          // Hz, single-pole response of the diode

    void validate() const;
    /// Non-fatal findings, e.g. responsivity above the unit quantum
    /// efficiency bound at 1550 nm.
    std::vector<std::string> warnings() const;
};

struct BalancedDetectorConfig {
    PhotodiodeParams diode_a{};
    PhotodiodeParams diode_b{};
    double load_resistance = 50.0;  // ohm
    double transfer_cutoff = 4e9;   // Hz, -3 dB point of H_pd
    int transfer_order = 2;         // Butterworth order
    /// White electronic noise into the load, dBm/Hz. Empty = noiseless.
    std::optional<double> electronic_noise_dbm_hz = -172.0;
    double balance_mismatch = 0.001;  // residual fractional imbalance after balancing
    double delay_mismatch = 5e-12;    // s, electrical/optical path difference
    double cmrr_ceiling_db = 120.0;
    double clearance_ceiling_db = 120.0;

    void validate() const;
    std::vector<std::string> warnings() const;

    double mean_responsivity() const;
    double saturation_current() const;
    /// Signed common-mode gain mismatch: (A_a - A_b)/mean(A) + balance_mismatch.
    double gain_mismatch() const;
};

/// Highest responsivity compatible with unit quantum efficiency at 1550 nm.
inline constexpr double kResponsivityWarningThreshold = 1.25;

/// Butterworth low-pass H_pd(f), H(0) = 1, |H(f_c)|^2 = 1/2.
std::complex<double> transfer_function(double f, const BalancedDetectorConfig &det);

/// Shot-noise electrical PSD 2 q P A R0 |H(f)|^2 in W/Hz.
double shot_noise_psd(double f, double p_opt, const BalancedDetectorConfig &det);

/// Technical noise with the LO off: electronic floor plus dark-current shot
/// noise, W/Hz.
double floor_psd(double f, const BalancedDetectorConfig &det);

/// Links dimensionless homodyne units to amperes. One unit of LO intensity is
/// one photoelectron per sample: lo_intensity = A P / (q fs) and
/// amperes_per_unit = q fs. With the vacuum convention sigma2_vac = 1/4 the
/// symmetric quadrature-point current then has mean-free white level 2 q A P
/// and every DC term maps to A P.
struct UnitBridge {
    double lo_intensity = 0.0;
    double amperes_per_unit = 0.0;
};

/// Vacuum quadrature variance for which the bridge reproduces shot noise.
inline constexpr double kShotNoiseSigma2 = 0.25;

UnitBridge calibrate_units(double p_opt, double responsivity, double sample_rate);

/// Multiplies samples and common_mode by `amperes_per_unit`.
NoiseTimeSeries scale_series(const NoiseTimeSeries &series, double amperes_per_unit);

struct DetectorOutput {
    NoiseTimeSeries series;  // A
    std::size_t clipped_samples = 0;
    std::vector<std::string> warnings;
};

/// Time-domain detector: adds common-mode leakage and dark-current shot
/// noise, filters by H_pd at every FFT bin, adds the electronic floor and
/// clips at the saturation current. The input is in amperes.
DetectorOutput apply_detector(const NoiseTimeSeries &series, const BalancedDetectorConfig &det);

/// Common-mode suppression in dB: differential response over common-mode
/// residual, from gain mismatch, delay mismatch and diode bandwidth mismatch.
/// Capped at cmrr_ceiling_db.
double cmrr(double f, const BalancedDetectorConfig &det);

struct ClearanceReport {
    std::vector<double> frequencies;  // Hz
    std::vector<double> quantum_psd;  // W/Hz
    std::vector<double> floor_psd;    // W/Hz
    std::vector<double> clearance_db;
    double threshold_db = 0.0;
    /// Upper edge of the band [0, f] over which clearance >= threshold. Zero
    /// when the threshold is not met at the first frequency.
    double band_limit_hz = 0.0;
};

/// 10 log10(1 + N_q/N_floor) on the given grid (ascending), capped at the
/// clearance ceiling.
ClearanceReport clearance(double p_opt, const BalancedDetectorConfig &det, std::span<const double> frequencies,
                          double threshold_db);

}  // namespace qnoise

#endif
