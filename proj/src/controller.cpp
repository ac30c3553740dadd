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

#include "qnoise/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qnoise/error.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

namespace {

// Measurement ids 0 and 1 are the polarity probes; loop iteration i uses 2 + i.
constexpr std::uint64_t kFirstLoopMeasurement = 2;

}  // namespace

void ControllerConfig::validate() const {
    auto require = [](bool ok, const char *what) {
        if (!ok) {
            throw Error(ErrorCode::Config, std::string("controller: ") + what);
        }
    };
    require(v_pi > 0.0 && std::isfinite(v_pi), "v_pi must be positive");
    require(tolerance > 0.0 && std::isfinite(tolerance), "tolerance must be positive");
    require(dc_window >= 1, "dc_window must be at least 1");
    require(max_iterations >= 1, "max_iterations must be at least 1");
    require(std::isfinite(gain_p) && std::isfinite(gain_i), "gains must be finite");
    require(v_max > 0.0 && std::isfinite(v_max), "v_max must be positive");
    require(probe_phase > 0.0 && probe_phase < std::numbers::pi / 2, "probe_phase must lie in (0, pi/2)");
}

ControllerState ControllerState::initial(double bias_phase, double dc_reference, int loop_polarity) {
    ControllerState s;
    s.bias_phase = bias_phase;
    s.phase = bias_phase;
    s.dc_reference = dc_reference;
    s.loop_polarity = loop_polarity >= 0 ? 1 : -1;
    return s;
}

SimulationEnvironment::SimulationEnvironment(InterferometerConfig interferometer, LocalOscillator lo,
                                             SamplerConfig sampler)
    : interferometer_(interferometer), lo_(lo), sampler_(sampler) {
    sampler_.validate();
}

double SimulationEnvironment::measure(double phase, std::uint64_t measurement, std::size_t window) const {
    InterferometerConfig cfg = interferometer_;
    cfg.phi = {phase};
    SamplerConfig s = sampler_;
    s.n_samples = window;
    s.seed = derive_seed(sampler_.seed, streams::kController, measurement);
    return generate_timeseries(cfg, lo_, s).mean();
}

double SimulationEnvironment::expected_dc(double phase) const {
    InterferometerConfig cfg = interferometer_;
    cfg.phi = {phase};
    return analytic_moments(coeffs_from_transfer(compose_transfer(cfg)), lo_, sampler_.sigma2_vac).mean;
}

double SimulationEnvironment::dc_reference() const {
    return lo_.intensity() *
           std::abs(fringe_amplitude(interferometer_.alpha1, interferometer_.alpha2, interferometer_.losses));
}

PhaseDelay SimulationEnvironment::analytic_root() const {
    return balance_phase(interferometer_.alpha1, interferometer_.alpha2, interferometer_.losses);
}

double measure_dc(const SimulationEnvironment &env, const ControllerState &state, const ControllerConfig &config) {
    return env.measure(state.phase, kFirstLoopMeasurement + state.iteration, config.dc_window);
}

ControllerState step(const ControllerState &state, double measured_dc, const ControllerConfig &config) {
    ControllerState next = state;
    const double error = measured_dc / state.dc_reference;
    const double volts_per_rad = config.v_pi / std::numbers::pi;
    next.integral_accumulator += error;
    // Move the phase against the DC: phase = bias - polarity * (kp e + ki sum e).
    double u = config.gain_p * error + config.gain_i * next.integral_accumulator;
    double v = -state.loop_polarity * u * volts_per_rad;
    if (std::abs(v) > config.v_max) {
        // Rail reached: clamp and stop integrating.
        v = std::clamp(v, -config.v_max, config.v_max);
        next.integral_accumulator = state.integral_accumulator;
    }
    next.control_voltage = v;
    next.phase = state.bias_phase + v / volts_per_rad;
    ++next.iteration;
    return next;
}

BalanceResult run_until_balanced(const SimulationEnvironment &env, const ControllerConfig &config) {
    config.validate();
    BalanceResult result;
    result.analytic_root = env.analytic_root();
    const double reference = env.dc_reference();
    if (!(reference > 0.0)) {
        throw Error(ErrorCode::Degenerate, "no LO intensity: the DC error signal is identically zero");
    }

    const double bias = env.interferometer().phi.phi;
    const double up = env.measure(bias + config.probe_phase, 0, config.dc_window);
    const double down = env.measure(bias - config.probe_phase, 1, config.dc_window);
    int polarity;
    if (up != down) {
        polarity = up > down ? 1 : -1;
    } else {
        // Flat probe (e.g. an extremum of the fringe): fall back to the slope sign at quadrature.
        const double amp = fringe_amplitude(env.interferometer().alpha1, env.interferometer().alpha2,
                                            env.interferometer().losses);
        polarity = -amp * std::sin(bias) > 0 ? 1 : -1;
    }

    ControllerState state = ControllerState::initial(bias, reference, polarity);
    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        const double dc = measure_dc(env, state, config);
        result.trace.push_back({state.iteration, state.control_voltage, state.phase, dc});
        if (std::abs(dc / reference) <= config.tolerance) {
            state.converged = true;
            break;
        }
        state = step(state, dc, config);
    }
    result.state = state;
    return result;
}

}  // namespace qnoise
