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

#include "qnoise/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qnoise/error.hpp"

namespace qnoise {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string &where, const std::string &what) {
    throw Error(ErrorCode::Config, where + ": " + what);
}

// Reads one JSON object; every key must be consumed, so typos are errors.
class Section {
   public:
    Section(const json &doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) {
            config_error(path_, "expected an object");
        }
    }

    void number(const char *key, double &out) {
        if (const json *v = take(key)) {
            if (!v->is_number()) {
                config_error(where(key), "expected a number");
            }
            out = v->get<double>();
        }
    }
    void optional_number(const char *key, std::optional<double> &out) {
        if (const json *v = take(key)) {
            if (v->is_null()) {
                out.reset();
            } else if (v->is_number()) {
                out = v->get<double>();
            } else {
                config_error(where(key), "expected a number or null");
            }
        }
    }
    void unsigned_integer(const char *key, std::uint64_t &out) {
        if (const json *v = take(key)) {
            if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
                config_error(where(key), "expected a non-negative integer");
            }
            out = v->get<std::uint64_t>();
        }
    }
    void integer(const char *key, int &out) {
        if (const json *v = take(key)) {
            if (!v->is_number_integer()) {
                config_error(where(key), "expected an integer");
            }
            out = v->get<int>();
        }
    }
    void boolean(const char *key, bool &out) {
        if (const json *v = take(key)) {
            if (!v->is_boolean()) {
                config_error(where(key), "expected true or false");
            }
            out = v->get<bool>();
        }
    }
    void string(const char *key, std::string &out) {
        if (const json *v = take(key)) {
            if (!v->is_string()) {
                config_error(where(key), "expected a string");
            }
            out = v->get<std::string>();
        }
    }
    template <class Fn>
    void object(const char *key, Fn &&fn) {
        if (const json *v = take(key)) {
            Section sub(*v, where(key));
            fn(sub);
            sub.finish();
        }
    }

    void finish() const {
        for (const auto &item : doc_.items()) {
            if (!seen_.count(item.key())) {
                config_error(path_, "unknown key '" + item.key() + "'");
            }
        }
    }

   private:
    const json *take(const char *key) {
        seen_.insert(key);
        auto it = doc_.find(key);
        return it == doc_.end() ? nullptr : &*it;
    }
    std::string where(const char *key) const { return path_ + "." + key; }

    const json &doc_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_diode(Section &s, PhotodiodeSection &d) {
    s.number("responsivity_a_per_w", d.responsivity_a_per_w);
    s.number("dark_current_ua", d.dark_current_ua);
    s.number("saturation_current_ma", d.saturation_current_ma);
    s.number("bandwidth_ghz", d.bandwidth_ghz);
}

json diode_json(const PhotodiodeSection &d) {
    return {{"responsivity_a_per_w", d.responsivity_a_per_w},
            {"dark_current_ua", d.dark_current_ua},
            {"saturation_current_ma", d.saturation_current_ma},
            {"bandwidth_ghz", d.bandwidth_ghz}};
}

json optional_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

void require(bool ok, const std::string &where, const std::string &what) {
    if (!ok) {
        config_error(where, what);
    }
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void RunConfig::validate() const {
    const auto &i = interferometer;
    require(finite(i.alpha1_rad) && finite(i.alpha2_rad) && finite(i.phase_rad), "interferometer",
            "angles must be finite");
    require(i.eta1 >= 0.0 && i.eta1 <= 1.0, "interferometer.eta1", "must lie in [0, 1]");
    require(i.eta2 >= 0.0 && i.eta2 <= 1.0, "interferometer.eta2", "must lie in [0, 1]");
    require(local_oscillator.power_mw >= 0.0 && finite(local_oscillator.power_mw), "local_oscillator.power_mw",
            "must be non-negative");
    require(finite(local_oscillator.phase_rad), "local_oscillator.phase_rad", "must be finite");

    build_sampler(*this).validate();
    build_detector(*this).validate();
    build_controller(*this).validate();
    build_adc(*this).validate();

    require(fringe.points >= 1, "fringe.points", "grid must be nonempty");
    require(finite(fringe.phase_min_rad) && finite(fringe.phase_max_rad), "fringe", "phase bounds must be finite");
    require(psd.segment_length >= 2, "psd.segment_length", "must be at least 2");
    parse_window(psd.window);
    require(psd.overlap >= 0.0 && psd.overlap < 1.0, "psd.overlap", "must lie in [0, 1)");
    require(finite(psd.threshold_db), "psd.threshold_db", "must be finite");
    require(psd.band_max_ghz > 0.0 && finite(psd.band_max_ghz), "psd.band_max_ghz", "must be positive");
    require(psd.clearance_points >= 2, "psd.clearance_points", "must be at least 2");
    require(power_scan.points >= 1, "power_scan.points", "grid must be nonempty");
    require(power_scan.power_min_mw > 0.0 && power_scan.power_max_mw >= power_scan.power_min_mw, "power_scan",
            "power grid must satisfy 0 < power_min_mw <= power_max_mw");
    require(power_scan.band_min_ghz >= 0.0 && power_scan.band_max_ghz > power_scan.band_min_ghz, "power_scan",
            "band must satisfy 0 <= band_min_ghz < band_max_ghz");
    require(qrng.n_bits >= 1, "qrng.n_bits", "must be positive");
    require(qrng.block_bits >= 8, "qrng.block_bits", "must be at least 8");
    require(!qrng.extraction_ratio || (*qrng.extraction_ratio > 0.0 && *qrng.extraction_ratio <= 1.0),
            "qrng.extraction_ratio", "must lie in (0, 1]");
}

RunConfig run_config_from_json(const json &doc) {
    RunConfig c;
    Section root(doc, "config");
    root.object("interferometer", [&](Section &s) {
        s.number("alpha1_rad", c.interferometer.alpha1_rad);
        s.number("alpha2_rad", c.interferometer.alpha2_rad);
        s.number("phase_rad", c.interferometer.phase_rad);
        s.number("eta1", c.interferometer.eta1);
        s.number("eta2", c.interferometer.eta2);
    });
    root.object("local_oscillator", [&](Section &s) {
        s.number("power_mw", c.local_oscillator.power_mw);
        s.number("phase_rad", c.local_oscillator.phase_rad);
    });
    root.object("sampler", [&](Section &s) {
        s.unsigned_integer("seed", c.sampler.seed);
        s.number("sample_rate_ghz", c.sampler.sample_rate_ghz);
        s.unsigned_integer("n_samples", c.sampler.n_samples);
        s.number("sigma2_vac", c.sampler.sigma2_vac);
        s.optional_number("rin_db_hz", c.sampler.rin_db_hz);
        s.number("rin_bandwidth_ghz", c.sampler.rin_bandwidth_ghz);
    });
    root.object("detector", [&](Section &s) {
        s.object("diode_a", [&](Section &d) { read_diode(d, c.detector.diode_a); });
        s.object("diode_b", [&](Section &d) { read_diode(d, c.detector.diode_b); });
        s.number("load_resistance_ohm", c.detector.load_resistance_ohm);
        s.number("transfer_cutoff_ghz", c.detector.transfer_cutoff_ghz);
        s.integer("transfer_order", c.detector.transfer_order);
        s.optional_number("electronic_noise_dbm_hz", c.detector.electronic_noise_dbm_hz);
        s.number("balance_mismatch", c.detector.balance_mismatch);
        s.number("delay_mismatch_ps", c.detector.delay_mismatch_ps);
        s.number("cmrr_ceiling_db", c.detector.cmrr_ceiling_db);
        s.number("clearance_ceiling_db", c.detector.clearance_ceiling_db);
    });
    root.object("controller", [&](Section &s) {
        s.number("v_pi_v", c.controller.v_pi_v);
        s.number("gain_p", c.controller.gain_p);
        s.number("gain_i", c.controller.gain_i);
        s.unsigned_integer("dc_window", c.controller.dc_window);
        s.number("tolerance", c.controller.tolerance);
        s.unsigned_integer("max_iterations", c.controller.max_iterations);
        s.number("v_max_v", c.controller.v_max_v);
        s.number("probe_phase_rad", c.controller.probe_phase_rad);
    });
    root.object("adc", [&](Section &s) {
        s.integer("bits", c.adc.bits);
        s.number("full_scale_sigma", c.adc.full_scale_sigma);
    });
    root.object("fringe", [&](Section &s) {
        s.number("phase_min_rad", c.fringe.phase_min_rad);
        s.number("phase_max_rad", c.fringe.phase_max_rad);
        s.unsigned_integer("points", c.fringe.points);
    });
    root.object("psd", [&](Section &s) {
        s.unsigned_integer("segment_length", c.psd.segment_length);
        s.string("window", c.psd.window);
        s.number("overlap", c.psd.overlap);
        s.boolean("lo_on", c.psd.lo_on);
        s.boolean("white_noise_self_test", c.psd.white_noise_self_test);
        s.number("threshold_db", c.psd.threshold_db);
        s.number("band_max_ghz", c.psd.band_max_ghz);
        s.unsigned_integer("clearance_points", c.psd.clearance_points);
    });
    root.object("power_scan", [&](Section &s) {
        s.number("power_min_mw", c.power_scan.power_min_mw);
        s.number("power_max_mw", c.power_scan.power_max_mw);
        s.unsigned_integer("points", c.power_scan.points);
        s.number("band_min_ghz", c.power_scan.band_min_ghz);
        s.number("band_max_ghz", c.power_scan.band_max_ghz);
    });
    root.object("qrng", [&](Section &s) {
        s.unsigned_integer("n_bits", c.qrng.n_bits);
        s.unsigned_integer("extractor_seed", c.qrng.extractor_seed);
        s.optional_number("extraction_ratio", c.qrng.extraction_ratio);
        s.unsigned_integer("block_bits", c.qrng.block_bits);
        s.boolean("use_detector", c.qrng.use_detector);
    });
    root.finish();
    c.validate();
    return c;
}

RunConfig run_config_from_string(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
    }
    return run_config_from_json(doc);
}

RunConfig load_run_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Config, "cannot open config file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return run_config_from_string(buf.str());
}

json to_json(const RunConfig &c) {
    json doc;
    doc["interferometer"] = {{"alpha1_rad", c.interferometer.alpha1_rad},
                             {"alpha2_rad", c.interferometer.alpha2_rad},
                             {"phase_rad", c.interferometer.phase_rad},
                             {"eta1", c.interferometer.eta1},
                             {"eta2", c.interferometer.eta2}};
    doc["local_oscillator"] = {{"power_mw", c.local_oscillator.power_mw},
                               {"phase_rad", c.local_oscillator.phase_rad}};
    doc["sampler"] = {{"seed", c.sampler.seed},
                      {"sample_rate_ghz", c.sampler.sample_rate_ghz},
                      {"n_samples", c.sampler.n_samples},
                      {"sigma2_vac", c.sampler.sigma2_vac},
                      {"rin_db_hz", optional_json(c.sampler.rin_db_hz)},
                      {"rin_bandwidth_ghz", c.sampler.rin_bandwidth_ghz}};
    doc["detector"] = {{"diode_a", diode_json(c.detector.diode_a)},
                       {"diode_b", diode_json(c.detector.diode_b)},
                       {"load_resistance_ohm", c.detector.load_resistance_ohm},
                       {"transfer_cutoff_ghz", c.detector.transfer_cutoff_ghz},
                       {"transfer_order", c.detector.transfer_order},
                       {"electronic_noise_dbm_hz", optional_json(c.detector.electronic_noise_dbm_hz)},
                       {"balance_mismatch", c.detector.balance_mismatch},
                       {"delay_mismatch_ps", c.detector.delay_mismatch_ps},
                       {"cmrr_ceiling_db", c.detector.cmrr_ceiling_db},
                       {"clearance_ceiling_db", c.detector.clearance_ceiling_db}};
    doc["controller"] = {{"v_pi_v", c.controller.v_pi_v},
                         {"gain_p", c.controller.gain_p},
                         {"gain_i", c.controller.gain_i},
                         {"dc_window", c.controller.dc_window},
                         {"tolerance", c.controller.tolerance},
                         {"max_iterations", c.controller.max_iterations},
                         {"v_max_v", c.controller.v_max_v},
                         {"probe_phase_rad", c.controller.probe_phase_rad}};
    doc["adc"] = {{"bits", c.adc.bits}, {"full_scale_sigma", c.adc.full_scale_sigma}};
    doc["fringe"] = {{"phase_min_rad", c.fringe.phase_min_rad},
                     {"phase_max_rad", c.fringe.phase_max_rad},
                     {"points", c.fringe.points}};
    doc["psd"] = {{"segment_length", c.psd.segment_length},
                  {"window", c.psd.window},
                  {"overlap", c.psd.overlap},
                  {"lo_on", c.psd.lo_on},
                  {"white_noise_self_test", c.psd.white_noise_self_test},
                  {"threshold_db", c.psd.threshold_db},
                  {"band_max_ghz", c.psd.band_max_ghz},
                  {"clearance_points", c.psd.clearance_points}};
    doc["power_scan"] = {{"power_min_mw", c.power_scan.power_min_mw},
                         {"power_max_mw", c.power_scan.power_max_mw},
                         {"points", c.power_scan.points},
                         {"band_min_ghz", c.power_scan.band_min_ghz},
                         {"band_max_ghz", c.power_scan.band_max_ghz}};
    doc["qrng"] = {{"n_bits", c.qrng.n_bits},
                   {"extractor_seed", c.qrng.extractor_seed},
                   {"extraction_ratio", optional_json(c.qrng.extraction_ratio)},
                   {"block_bits", c.qrng.block_bits},
                   {"use_detector", c.qrng.use_detector}};
    return doc;
}

InterferometerConfig build_interferometer(const RunConfig &c) {
    InterferometerConfig cfg;
    cfg.alpha1 = {c.interferometer.alpha1_rad};
    cfg.alpha2 = {c.interferometer.alpha2_rad};
    cfg.phi = {c.interferometer.phase_rad};
    try {
        cfg.losses = ArmLosses(c.interferometer.eta1, c.interferometer.eta2);
    } catch (const Error &e) {
        throw Error(ErrorCode::Config, std::string("interferometer: ") + e.what());
    }
    return cfg;
}

SamplerConfig build_sampler(const RunConfig &c) {
    SamplerConfig s;
    s.seed = c.sampler.seed;
    s.sample_rate = c.sampler.sample_rate_ghz * 1e9;
    s.n_samples = c.sampler.n_samples;
    s.sigma2_vac = c.sampler.sigma2_vac;
    s.rin_dbhz = c.sampler.rin_db_hz;
    s.rin_bandwidth = c.sampler.rin_bandwidth_ghz * 1e9;
    return s;
}

namespace {

PhotodiodeParams build_diode(const PhotodiodeSection &d) {
    return {d.responsivity_a_per_w, d.dark_current_ua * 1e-6, d.saturation_current_ma * 1e-3, d.bandwidth_ghz * 1e9};
}

}  // namespace

BalancedDetectorConfig build_detector(const RunConfig &c) {
    BalancedDetectorConfig d;
    d.diode_a = build_diode(c.detector.diode_a);
    d.diode_b = build_diode(c.detector.diode_b);
    d.load_resistance = c.detector.load_resistance_ohm;
    d.transfer_cutoff = c.detector.transfer_cutoff_ghz * 1e9;
    d.transfer_order = c.detector.transfer_order;
    d.electronic_noise_dbm_hz = c.detector.electronic_noise_dbm_hz;
    d.balance_mismatch = c.detector.balance_mismatch;
    d.delay_mismatch = c.detector.delay_mismatch_ps * 1e-12;
    d.cmrr_ceiling_db = c.detector.cmrr_ceiling_db;
    d.clearance_ceiling_db = c.detector.clearance_ceiling_db;
    return d;
}

ControllerConfig build_controller(const RunConfig &c) {
    ControllerConfig k;
    k.v_pi = c.controller.v_pi_v;
    k.gain_p = c.controller.gain_p;
    k.gain_i = c.controller.gain_i;
    k.dc_window = c.controller.dc_window;
    k.tolerance = c.controller.tolerance;
    k.max_iterations = c.controller.max_iterations;
    k.v_max = c.controller.v_max_v;
    k.probe_phase = c.controller.probe_phase_rad;
    return k;
}

AdcConfig build_adc(const RunConfig &c) { return {c.adc.bits, c.adc.full_scale_sigma}; }

PsdOptions build_psd_options(const RunConfig &c) {
    PsdOptions o;
    o.segment_length = c.psd.segment_length;
    o.window = parse_window(c.psd.window);
    o.overlap = c.psd.overlap;
    return o;
}

LocalOscillator build_local_oscillator(const RunConfig &c, double power_w) {
    const UnitBridge bridge =
        calibrate_units(power_w, build_detector(c).mean_responsivity(), c.sampler.sample_rate_ghz * 1e9);
    return LocalOscillator::from_intensity(bridge.lo_intensity, c.local_oscillator.phase_rad);
}

LocalOscillator build_local_oscillator(const RunConfig &c) {
    return build_local_oscillator(c, c.local_oscillator.power_mw * 1e-3);
}

}  // namespace qnoise
