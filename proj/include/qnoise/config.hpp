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

#ifndef QNOISE_CONFIG_HPP
#define QNOISE_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "qnoise/controller.hpp"
#include "qnoise/detector.hpp"
#include "qnoise/homodyne.hpp"
#include "qnoise/interferometer.hpp"
#include "qnoise/qrng.hpp"
#include "qnoise/sampler.hpp"
#include "qnoise/spectrum.hpp"

namespace qnoise {

// Run configuration document. Every physical field carries its unit in the
// name and is stored in that unit, so that parse -> serialize -> parse is
// exact; the build_* helpers convert to SI module configs.

struct InterferometerSection {
    double alpha1_rad = 0.78539816339744830962;
    double alpha2_rad = 0.78539816339744830962;
    double phase_rad = 1.57079632679489661923;
    double eta1 = 1.0;
    double eta2 = 1.0;
    bool operator==(const InterferometerSection &) const = default;
};

struct LocalOscillatorSection {
    double power_mw = 40.0;  // total LO power reaching the photodiodes
    double phase_rad = 0.0;  // LO phase; 0 makes E_LO real
    bool operator==(const LocalOscillatorSection &) const = default;
};

struct SamplerSection {
    std::uint64_t seed = 1;
    double sample_rate_ghz = 20.0;
    std::uint64_t n_samples = 1 << 20;
    double sigma2_vac = 0.25;
    std::optional<double> rin_db_hz;  // null = off
    double rin_bandwidth_ghz = 1.0;
    bool operator==(const SamplerSection &) const = default;
};

struct PhotodiodeSection {
    double responsivity_a_per_w = 0.78;
    double dark_current_ua = 0.5;
    double saturation_current_ma = 30.0;
    double bandwidth_ghz = 10.0;
    bool operator==(const PhotodiodeSection &) const = default;
};

struct DetectorSection {
    PhotodiodeSection diode_a{};
    PhotodiodeSection diode_b{};
    double load_resistance_ohm = 50.0;
    double transfer_cutoff_ghz = 4.0;
    int transfer_order = 2;
    std::optional<double> electronic_noise_dbm_hz = -172.0;  // null = off
    double balance_mismatch = 0.001;
    double delay_mismatch_ps = 5.0;
    double cmrr_ceiling_db = 120.0;
    double clearance_ceiling_db = 120.0;
    bool operator==(const DetectorSection &) const = default;
};

struct ControllerSection {
    double v_pi_v = 5.0;
    double gain_p = 0.0;
    double gain_i = 0.5;
    std::uint64_t dc_window = 10000;
    double tolerance = 1e-3;
    std::uint64_t max_iterations = 200;
    double v_max_v = 10.0;
    double probe_phase_rad = 0.05;
    bool operator==(const ControllerSection &) const = default;
};

struct AdcSection {
    int bits = 8;
    double full_scale_sigma = 4.0;
    bool operator==(const AdcSection &) const = default;
};

struct FringeSection {
    double phase_min_rad = 0.0;
    double phase_max_rad = 6.283185307179586477;
    std::uint64_t points = 181;
    bool operator==(const FringeSection &) const = default;
};

struct PsdSection {
    std::uint64_t segment_length = 4096;
    std::string window = "hann";
    double overlap = 0.5;
    bool lo_on = true;
    bool white_noise_self_test = false;
    double threshold_db = 12.0;
    double band_max_ghz = 10.0;
    std::uint64_t clearance_points = 401;
    bool operator==(const PsdSection &) const = default;
};

struct PowerScanSection {
    double power_min_mw = 4.0;
    double power_max_mw = 40.0;
    std::uint64_t points = 10;
    double band_min_ghz = 0.01;
    double band_max_ghz = 4.0;
    bool operator==(const PowerScanSection &) const = default;
};

struct QrngSection {
    std::uint64_t n_bits = 1000000;
    std::uint64_t extractor_seed = 7;
    std::optional<double> extraction_ratio;  // null = 0.9 * entropy bound
    std::uint64_t block_bits = 1024;
    bool use_detector = true;
    bool operator==(const QrngSection &) const = default;
};

struct RunConfig {
    InterferometerSection interferometer{};
    LocalOscillatorSection local_oscillator{};
    SamplerSection sampler{};
    DetectorSection detector{};
    ControllerSection controller{};
    AdcSection adc{};
    FringeSection fringe{};
    PsdSection psd{};
    PowerScanSection power_scan{};
    QrngSection qrng{};
    bool operator==(const RunConfig &) const = default;

    /// Checks every section; throws Error(Config) naming the offending key.
    void validate() const;
};

/// Strict parse: unknown keys and wrong types are Error(Config). Missing keys
/// take the defaults above. The result is validated.
RunConfig run_config_from_json(const nlohmann::json &doc);
RunConfig run_config_from_string(const std::string &text);
RunConfig load_run_config(const std::string &path);
nlohmann::json to_json(const RunConfig &config);

InterferometerConfig build_interferometer(const RunConfig &config);
SamplerConfig build_sampler(const RunConfig &config);
BalancedDetectorConfig build_detector(const RunConfig &config);
ControllerConfig build_controller(const RunConfig &config);
AdcConfig build_adc(const RunConfig &config);
PsdOptions build_psd_options(const RunConfig &config);
/// LO in vacuum units for the configured power, mean responsivity and sample
/// rate (see calibrate_units).
LocalOscillator build_local_oscillator(const RunConfig &config);
LocalOscillator build_local_oscillator(const RunConfig &config, double power_w);

}  // namespace qnoise

#endif
