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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qnoise/config.hpp"
#include "qnoise/error.hpp"

using namespace qnoise;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::string &text) {
    try {
        run_config_from_string(text);
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode{};
}

}  // namespace

TEST(RunConfig, EmptyDocumentGivesDefaults) {
    const RunConfig c = run_config_from_string("{}");
    EXPECT_EQ(c, RunConfig{});
    EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, RoundTripDefaults) {
    const RunConfig c;
    EXPECT_EQ(run_config_from_json(to_json(c)), c);
    EXPECT_EQ(to_json(run_config_from_json(to_json(c))), to_json(c));
}

TEST(RunConfig, RoundTripEdited) {
    RunConfig c;
    c.interferometer.alpha2_rad = 0.7753974966107530;
    c.interferometer.eta1 = 0.9;
    c.interferometer.eta2 = 0.85;
    c.local_oscillator.phase_rad = 0.1;
    c.sampler.seed = 18446744073709551615ULL;
    c.sampler.rin_db_hz = -140;
    c.detector.electronic_noise_dbm_hz.reset();
    c.detector.diode_b.responsivity_a_per_w = 0.8;
    c.controller.gain_p = 0.1;
    c.psd.window = "rectangular";
    c.qrng.extraction_ratio = 0.5;
    c.qrng.use_detector = false;
    const std::string text = to_json(c).dump();
    EXPECT_EQ(run_config_from_string(text), c);
}

TEST(RunConfig, RejectsUnknownKeys) {
    EXPECT_EQ(code_of(R"({"interferometr": {}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"interferometer": {"eta3": 1}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"detector": {"diode_a": {"responsivity": 0.8}}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"local_oscillator": {"power_w": 0.04}})"), ErrorCode::Config);
}

TEST(RunConfig, RejectsBadValues) {
    EXPECT_EQ(code_of("not json"), ErrorCode::Config);
    EXPECT_EQ(code_of("[]"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"interferometer": {"eta1": 1.2}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"interferometer": {"eta1": "high"}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"sampler": {"seed": -1}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"sampler": {"n_samples": 0}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"sampler": {"sigma2_vac": -0.1}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"psd": {"window": "hamming"}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"adc": {"bits": 0}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"fringe": {"points": 0}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"power_scan": {"points": 0}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"controller": {"v_pi_v": 0}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"detector": {"load_resistance_ohm": -50}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"qrng": {"extraction_ratio": 1.5}})"), ErrorCode::Config);
    EXPECT_EQ(code_of(R"({"psd": {"lo_on": 1}})"), ErrorCode::Config);
}

TEST(RunConfig, NullTurnsOptionalsOff) {
    const RunConfig c = run_config_from_string(R"({"detector": {"electronic_noise_dbm_hz": null}})");
    EXPECT_FALSE(c.detector.electronic_noise_dbm_hz);
    EXPECT_FALSE(build_detector(c).electronic_noise_dbm_hz);
}

TEST(RunConfig, UnitConversions) {
    const RunConfig c = run_config_from_string(R"({
        "local_oscillator": {"power_mw": 10},
        "sampler": {"sample_rate_ghz": 20, "rin_db_hz": -150, "rin_bandwidth_ghz": 0.5},
        "detector": {"diode_a": {"dark_current_ua": 0.5, "saturation_current_ma": 30, "bandwidth_ghz": 10},
                     "transfer_cutoff_ghz": 4, "delay_mismatch_ps": 5},
        "controller": {"v_pi_v": 5, "v_max_v": 10}
    })");
    const SamplerConfig s = build_sampler(c);
    EXPECT_EQ(s.sample_rate, 20e9);
    EXPECT_EQ(*s.rin_dbhz, -150);
    EXPECT_EQ(s.rin_bandwidth, 0.5e9);
    const BalancedDetectorConfig d = build_detector(c);
    EXPECT_DOUBLE_EQ(d.diode_a.dark_current, 0.5e-6);
    EXPECT_DOUBLE_EQ(d.diode_a.saturation_current, 30e-3);
    EXPECT_EQ(d.diode_a.bandwidth, 10e9);
    EXPECT_EQ(d.transfer_cutoff, 4e9);
    EXPECT_DOUBLE_EQ(d.delay_mismatch, 5e-12);
    const ControllerConfig k = build_controller(c);
    EXPECT_EQ(k.v_pi, 5);
    EXPECT_EQ(k.v_max, 10);
    // 10 mW on 0.78 A/W at 20 GS/s: A P / (q fs) photoelectrons per sample.
    EXPECT_NEAR(build_local_oscillator(c).intensity(), 0.78 * 10e-3 / (1.602176634e-19 * 20e9), 1e-6);
    EXPECT_EQ(build_psd_options(c).window, Window::Hann);
}

TEST(RunConfig, LoadFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "qnoise_config_test.json";
    {
        std::ofstream out(path);
        out << R"({"sampler": {"seed": 42}})";
    }
    EXPECT_EQ(load_run_config(path.string()).sampler.seed, 42u);
    std::filesystem::remove(path);
    try {
        load_run_config(path.string());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Config);
    }
}
