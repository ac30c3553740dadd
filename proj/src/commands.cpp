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

#include "qnoise/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "qnoise/controller.hpp"
#include "qnoise/detector.hpp"
#include "qnoise/error.hpp"
#include "qnoise/qrng.hpp"
#include "qnoise/rng.hpp"
#include "qnoise/sampler.hpp"
#include "qnoise/spectrum.hpp"

namespace qnoise {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Bins pooled per point when locating the measured clearance band edge.
constexpr std::size_t kClearancePool = 16;
constexpr std::size_t kSelfTestBands = 16;
constexpr double kSelfTestTolerance = 0.05;
constexpr double kSignificance = 3.0;
constexpr std::uint64_t kScanStream = 0x5ca9;

void prepare_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error(ErrorCode::Io, "cannot create output directory " + dir.string());
    }
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
}

void write_bytes(const fs::path &path, const std::vector<std::uint8_t> &bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
}

class Csv {
   public:
    explicit Csv(std::initializer_list<const char *> header) {
        bool first = true;
        for (const char *h : header) {
            text_ += first ? "" : ",";
            text_ += h;
            first = false;
        }
        text_ += '\n';
    }
    Csv &num(double v) { return field(v, "%.17g"); }
    Csv &db(double v) { return field(v, "%.6g"); }
    Csv &count(std::size_t v) {
        sep();
        text_ += std::to_string(v);
        return *this;
    }
    void end() {
        text_ += '\n';
        fresh_ = true;
    }
    const std::string &str() const { return text_; }

   private:
    Csv &field(double v, const char *fmt) {
        sep();
        char buf[40];
        std::snprintf(buf, sizeof buf, fmt, v);
        text_ += buf;
        return *this;
    }
    void sep() {
        if (!fresh_) {
            text_ += ',';
        }
        fresh_ = false;
    }
    std::string text_;
    bool fresh_ = true;
};

void write_sidecar(const fs::path &path, const char *command, const RunConfig &config, const json &results) {
    json doc;
    doc["command"] = command;
    doc["config"] = to_json(config);
    doc["results"] = results;
    write_file(path, doc.dump(2) + "\n");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

void append_unique(json &warnings, const std::vector<std::string> &items) {
    for (const auto &w : items) {
        if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
            warnings.push_back(w);
        }
    }
}

// Difference current in amperes after the balanced detector, at LO power p_w.
DetectorOutput detected_current(const RunConfig &config, double p_w) {
    const SamplerConfig sampler = build_sampler(config);
    const BalancedDetectorConfig det = build_detector(config);
    const UnitBridge bridge = calibrate_units(p_w, det.mean_responsivity(), sampler.sample_rate);
    const NoiseTimeSeries raw =
        generate_timeseries(build_interferometer(config), build_local_oscillator(config, p_w), sampler);
    return apply_detector(scale_series(raw, bridge.amperes_per_unit), det);
}

PsdEstimate electrical_psd(const NoiseTimeSeries &current, const RunConfig &config) {
    PsdOptions opt = build_psd_options(config);
    opt.detrend = Detrend::Mean;
    if (opt.segment_length > current.size()) {
        throw Error(ErrorCode::Config, "psd.segment_length " + std::to_string(opt.segment_length) +
                                           " exceeds sampler.n_samples " + std::to_string(current.size()));
    }
    PsdEstimate est = estimate_psd(current, opt);
    const double r0 = config.detector.load_resistance_ohm;
    for (auto &p : est.power) {
        p *= r0;
    }
    return est;
}

void check_finite(double v, const char *what) {
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::Numerical, std::string(what) + " is not finite");
    }
}

json white_noise_self_test(const RunConfig &config) {
    const SamplerConfig s = build_sampler(config);
    NoiseTimeSeries white;
    white.sample_rate = s.sample_rate;
    white.seed = s.seed;
    white.samples.resize(s.n_samples);
    GaussianSource g(derive_seed(s.seed, streams::kElectronic, 1));
    for (auto &v : white.samples) {
        v = g.normal();
    }
    PsdOptions opt = build_psd_options(config);
    opt.detrend = Detrend::None;
    const PsdEstimate est = estimate_psd(white, opt);
    const double expected = 2.0 / s.sample_rate;
    const std::size_t first = 1, last = est.power.size() - 1;  // skip DC and Nyquist
    const std::size_t span = last - first;
    double worst = 0.0;
    json bands = json::array();
    for (std::size_t b = 0; b < kSelfTestBands; ++b) {
        const std::size_t lo = first + span * b / kSelfTestBands, hi = first + span * (b + 1) / kSelfTestBands;
        if (hi <= lo) {
            continue;
        }
        double mean = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            mean += est.power[k];
        }
        mean /= static_cast<double>(hi - lo);
        const double dev = mean / expected - 1.0;
        worst = std::max(worst, std::abs(dev));
        bands.push_back(dev);
    }
    return {{"expected_psd_per_hz", expected},
            {"band_relative_deviation", bands},
            {"max_relative_deviation", worst},
            {"tolerance", kSelfTestTolerance},
            {"flat", worst <= kSelfTestTolerance}};
}

}  // namespace

OriginFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) {
        throw Error(ErrorCode::InvalidArgument, "fit needs matching, nonempty x and y");
    }
    const std::size_t n = x.size();
    double sxx = 0, sxy = 0, sx3 = 0, sx4 = 0, sx2y = 0, ymean = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x2 = x[i] * x[i];
        sxx += x2;
        sxy += x[i] * y[i];
        sx3 += x2 * x[i];
        sx4 += x2 * x2;
        sx2y += x2 * y[i];
        ymean += y[i];
    }
    ymean /= static_cast<double>(n);
    if (!(sxx > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "fit needs a nonzero abscissa");
    }
    OriginFit fit;
    fit.linear = sxy / sxx;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ss_res += std::pow(y[i] - fit.linear * x[i], 2);
        ss_tot += std::pow(y[i] - ymean, 2);
    }
    fit.r_squared = ss_tot > 0 ? 1 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);

    const double det = sxx * sx4 - sx3 * sx3;
    if (n >= 3 && det > 0.0) {
        fit.quad_linear = (sx4 * sxy - sx3 * sx2y) / det;
        fit.quad_quadratic = (sxx * sx2y - sx3 * sxy) / det;
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            rss += std::pow(y[i] - fit.quad_linear * x[i] - fit.quad_quadratic * x[i] * x[i], 2);
        }
        const double s2 = rss / static_cast<double>(n - 2);
        fit.quad_quadratic_se = std::sqrt(s2 * sxx / det);
    }
    return fit;
}

json cmd_fringe(const RunConfig &config, const fs::path &out_dir) {
    config.validate();
    prepare_dir(out_dir);
    InterferometerConfig interf = build_interferometer(config);
    const LocalOscillator lo = build_local_oscillator(config);
    const double vac = 2 * config.sampler.sigma2_vac;

    Csv csv({"phase_rad", "out1_mean", "out2_mean", "difference_mean"});
    double out1_min = INFINITY, out1_max = -INFINITY;
    for (double phi : linspace(config.fringe.phase_min_rad, config.fringe.phase_max_rad, config.fringe.points)) {
        interf.phi = {phi};
        const TransferMatrix u = compose_transfer(interf);
        const double out1 = std::norm(u.u11) * lo.intensity() + std::norm(u.u12) * vac;
        const double out2 = std::norm(u.u21) * lo.intensity() + std::norm(u.u22) * vac;
        const double diff = analytic_moments(coeffs_from_transfer(u), lo, config.sampler.sigma2_vac).mean;
        check_finite(diff, "difference current");
        out1_min = std::min(out1_min, out1);
        out1_max = std::max(out1_max, out1);
        csv.num(phi).num(out1).num(out2).num(diff).end();
    }
    write_file(out_dir / "fringe.csv", csv.str());

    json results;
    results["points"] = config.fringe.points;
    results["lo_intensity"] = lo.intensity();
    results["visibility"] = out1_max + out1_min > 0 ? (out1_max - out1_min) / (out1_max + out1_min) : 0.0;
    results["fringe_amplitude"] = fringe_amplitude(interf.alpha1, interf.alpha2, interf.losses);
    results["out1_max"] = out1_max;
    results["out1_min"] = out1_min;
    results["warnings"] = json::array();
    write_sidecar(out_dir / "fringe.json", "fringe", config, results);
    return results;
}

json cmd_balance(const RunConfig &config, const fs::path &out_dir) {
    config.validate();
    prepare_dir(out_dir);
    const SimulationEnvironment env(build_interferometer(config), build_local_oscillator(config),
                                    build_sampler(config));
    const BalanceResult run = run_until_balanced(env, build_controller(config));

    Csv csv({"iteration", "voltage_v", "phase_rad", "dc_mean"});
    for (const auto &t : run.trace) {
        csv.count(t.iteration).num(t.voltage).num(t.phase).num(t.dc_mean).end();
    }
    write_file(out_dir / "balance_trace.csv", csv.str());

    constexpr double pi = std::numbers::pi;
    const double root = run.analytic_root.phi;
    const double last_dc = run.trace.empty() ? 0.0 : run.trace.back().dc_mean;
    json results;
    results["converged"] = run.state.converged;
    results["iterations"] = run.trace.size();
    results["final_phase_rad"] = run.state.phase;
    results["control_voltage_v"] = run.state.control_voltage;
    results["analytic_root_rad"] = root;
    results["root_offset_from_quadrature_over_pi"] = (root - pi / 2) / pi;
    results["phase_error_over_pi"] = (run.state.phase - root) / pi;
    results["loop_polarity"] = run.state.loop_polarity;
    results["dc_reference"] = run.state.dc_reference;
    results["residual_imbalance"] = last_dc / run.state.dc_reference;
    results["warnings"] = json::array();
    write_sidecar(out_dir / "balance.json", "balance", config, results);
    if (!run.state.converged) {
        throw Error(ErrorCode::NonConvergence,
                    "controller did not converge within " + std::to_string(config.controller.max_iterations) +
                        " iterations (last normalized DC " + std::to_string(last_dc / run.state.dc_reference) + ")");
    }
    return results;
}

json cmd_psd(const RunConfig &config, const fs::path &out_dir) {
    config.validate();
    prepare_dir(out_dir);
    const BalancedDetectorConfig det = build_detector(config);
    const double p_w = config.psd.lo_on ? config.local_oscillator.power_mw * 1e-3 : 0.0;
    json warnings = json::array();

    const DetectorOutput off = detected_current(config, 0.0);
    append_unique(warnings, off.warnings);
    const PsdEstimate floor = electrical_psd(off.series, config);
    PsdEstimate on = floor;
    if (config.psd.lo_on) {
        const DetectorOutput lit = detected_current(config, p_w);
        append_unique(warnings, lit.warnings);
        on = electrical_psd(lit.series, config);
    }

    Csv csv({"frequency_hz", "psd_w_per_hz", "floor_w_per_hz", "model_w_per_hz", "clearance_db"});
    double err2 = 0.0;
    std::size_t err_bins = 0;
    for (std::size_t k = 0; k < on.power.size(); ++k) {
        const double f = on.frequencies[k];
        const double quantum = shot_noise_psd(f, p_w, det);
        const double model = quantum + floor_psd(f, det);
        const double clear = floor.power[k] > 0 ? 10 * std::log10(on.power[k] / floor.power[k]) : 0.0;
        check_finite(on.power[k], "power spectral density");
        csv.num(f).num(on.power[k]).num(floor.power[k]).num(model).db(clear).end();
        if (k > 0 && f <= det.transfer_cutoff && quantum > 0) {
            err2 += std::pow((on.power[k] - floor.power[k]) / quantum - 1, 2);
            ++err_bins;
        }
    }
    write_file(out_dir / "psd.csv", csv.str());

    // Measured band edge on pooled bins, so single-bin scatter does not end the band early.
    double measured_edge = 0.0;
    if (config.psd.lo_on) {
        for (std::size_t k = 1; k + kClearancePool <= on.power.size(); k += kClearancePool) {
            double s_on = 0, s_off = 0;
            for (std::size_t j = k; j < k + kClearancePool; ++j) {
                s_on += on.power[j];
                s_off += floor.power[j];
            }
            if (!(s_off > 0) || 10 * std::log10(s_on / s_off) < config.psd.threshold_db) {
                break;
            }
            measured_edge = on.frequencies[k + kClearancePool - 1];
        }
    }

    // The model curve is always for the configured LO power, even when the simulated LO is off.
    const double model_p_w = config.local_oscillator.power_mw * 1e-3;
    const std::vector<double> grid = linspace(0.0, config.psd.band_max_ghz * 1e9, config.psd.clearance_points);
    ClearanceReport report;
    if (model_p_w > 0.0) {
        report = clearance(model_p_w, det, grid, config.psd.threshold_db);
    }
    Csv ccsv({"frequency_hz", "quantum_psd_w_per_hz", "floor_psd_w_per_hz", "clearance_db"});
    for (std::size_t i = 0; i < report.frequencies.size(); ++i) {
        ccsv.num(report.frequencies[i]).num(report.quantum_psd[i]).num(report.floor_psd[i]).db(report.clearance_db[i]).end();
    }
    write_file(out_dir / "clearance.csv", ccsv.str());

    json results;
    results["lo_on"] = config.psd.lo_on;
    results["lo_power_w"] = p_w;
    results["n_averages"] = on.n_averages;
    results["resolution_hz"] = on.resolution();
    results["threshold_db"] = config.psd.threshold_db;
    results["model_band_limit_hz"] = report.band_limit_hz;
    results["measured_band_limit_hz"] = measured_edge;
    results["quantum_psd_at_dc_w_per_hz"] = shot_noise_psd(0.0, p_w, det);
    results["quantum_psd_rms_relative_error"] = err_bins > 0 ? std::sqrt(err2 / static_cast<double>(err_bins)) : 0.0;
    results["floor_power_w"] = floor.total_power();
    if (config.psd.white_noise_self_test) {
        results["white_noise_self_test"] = white_noise_self_test(config);
    }
    results["warnings"] = warnings;
    write_sidecar(out_dir / "psd.json", "psd", config, results);
    return results;
}

json cmd_power_scan(const RunConfig &config, const fs::path &out_dir) {
    config.validate();
    const double nyquist = config.sampler.sample_rate_ghz * 1e9 / 2;
    const double band_lo = config.power_scan.band_min_ghz * 1e9, band_hi = config.power_scan.band_max_ghz * 1e9;
    if (band_hi > nyquist) {
        throw Error(ErrorCode::Config, "power_scan.band_max_ghz lies above the Nyquist frequency");
    }
    prepare_dir(out_dir);
    json warnings = json::array();

    // Independent noise per point; shared draws would leave a deterministic
    // sqrt(P) cross-term between quantum and floor noise in the fit residuals.
    auto point_config = [&](std::size_t i) {
        RunConfig c = config;
        c.sampler.seed = derive_seed(config.sampler.seed, kScanStream, i);
        return c;
    };
    const RunConfig dark = point_config(0);
    const DetectorOutput off = detected_current(dark, 0.0);
    append_unique(warnings, off.warnings);
    const double floor_w = electrical_psd(off.series, dark).band_power(band_lo, band_hi);

    const std::vector<double> powers_mw =
        linspace(config.power_scan.power_min_mw, config.power_scan.power_max_mw, config.power_scan.points);
    std::vector<double> p_w, excess;
    Csv csv({"power_mw", "band_power_w", "floor_w", "excess_w"});
    for (std::size_t i = 0; i < powers_mw.size(); ++i) {
        const double mw = powers_mw[i];
        const RunConfig point = point_config(i + 1);
        const DetectorOutput lit = detected_current(point, mw * 1e-3);
        append_unique(warnings, lit.warnings);
        const double band = electrical_psd(lit.series, point).band_power(band_lo, band_hi);
        check_finite(band, "band power");
        p_w.push_back(mw * 1e-3);
        excess.push_back(band - floor_w);
        csv.num(mw).num(band).num(floor_w).num(band - floor_w).end();
    }
    write_file(out_dir / "power_scan.csv", csv.str());

    const OriginFit fit = fit_through_origin(p_w, excess);
    const double t = fit.quad_quadratic_se > 0 ? fit.quad_quadratic / fit.quad_quadratic_se : 0.0;
    json results;
    results["points"] = powers_mw.size();
    results["band_hz"] = {band_lo, band_hi};
    results["floor_w"] = floor_w;
    results["linear_slope"] = fit.linear;
    results["linear_r_squared"] = fit.r_squared;
    results["quadratic_linear_term"] = fit.quad_linear;
    results["quadratic_term"] = fit.quad_quadratic;
    results["quadratic_term_se"] = fit.quad_quadratic_se;
    results["quadratic_t"] = t;
    results["quadratic_significant"] = fit.quad_quadratic > 0 && t > kSignificance;
    results["warnings"] = warnings;
    write_sidecar(out_dir / "power_scan.json", "power-scan", config, results);
    return results;
}

json cmd_qrng(const RunConfig &config, const fs::path &out_dir) {
    config.validate();
    prepare_dir(out_dir);
    const AdcConfig adc = build_adc(config);
    const double h_min = min_entropy(adc);
    const double bound = h_min / adc.bits;
    const double ratio = config.qrng.extraction_ratio.value_or(0.9 * bound);
    if (ratio > bound) {
        throw Error(ErrorCode::Config, "qrng.extraction_ratio " + std::to_string(ratio) +
                                           " exceeds the min-entropy bound " + std::to_string(bound));
    }
    // Enough samples that floor(ratio * raw_bits) covers n_bits.
    const std::size_t n_bits = config.qrng.n_bits;
    const auto samples = static_cast<std::size_t>(
        std::ceil(static_cast<double>(n_bits + 1) / (ratio * static_cast<double>(adc.bits))));

    RunConfig run = config;
    run.sampler.n_samples = samples;
    json warnings = json::array();
    const double p_w = config.local_oscillator.power_mw * 1e-3;
    NoiseTimeSeries current;
    if (config.qrng.use_detector) {
        DetectorOutput out = detected_current(run, p_w);
        append_unique(warnings, out.warnings);
        current = std::move(out.series);
    } else {
        const SamplerConfig sampler = build_sampler(run);
        current = generate_timeseries(build_interferometer(run), build_local_oscillator(run, p_w), sampler);
    }
    // AC-coupled ADC: the DC offset of the difference current is removed first.
    const double dc = current.mean();
    for (auto &v : current.samples) {
        v -= dc;
    }
    const QuantizedSeries codes = quantize(current, adc);
    const BitStream hashed = extract(codes, ratio, config.qrng.extractor_seed, config.qrng.block_bits);
    if (hashed.size() < n_bits) {
        throw Error(ErrorCode::Numerical, "extractor produced fewer bits than requested");
    }
    BitStream bits(n_bits);
    for (std::size_t i = 0; i < n_bits; ++i) {
        bits.set(i, hashed.get(i));
    }
    write_bytes(out_dir / "bits.bin", bits.bytes());

    json results;
    results["n_bits"] = n_bits;
    results["raw_samples"] = samples;
    results["sampler_seed"] = config.sampler.seed;
    results["extractor_seed"] = config.qrng.extractor_seed;
    results["adc_bits"] = adc.bits;
    results["min_entropy_bits_per_sample"] = h_min;
    results["entropy_bound"] = bound;
    results["extraction_ratio"] = ratio;
    results["ones_fraction"] = static_cast<double>(bits.count_ones()) / static_cast<double>(n_bits);
    if (n_bits >= kMinCheckBits) {
        const RandomnessReport r = randomness_checks(bits);
        results["checks"] = {{"monobit_z", r.monobit_z},
                             {"runs_z", r.runs_z},
                             {"autocorrelation_z", r.autocorrelation_z},
                             {"threshold", r.threshold},
                             {"passed", r.passed()}};
    } else {
        warnings.push_back("fewer than " + std::to_string(kMinCheckBits) + " bits: randomness checks skipped");
    }
    results["warnings"] = warnings;
    write_sidecar(out_dir / "qrng.json", "qrng", config, results);
    return results;
}

}  // namespace qnoise
