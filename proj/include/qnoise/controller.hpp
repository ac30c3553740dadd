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

#ifndef QNOISE_CONTROLLER_HPP
#define QNOISE_CONTROLLER_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qnoise/homodyne.hpp"
#include "qnoise/interferometer.hpp"
#include "qnoise/sampler.hpp"

namespace qnoise {

struct ControllerConfig {
    double v_pi = 5.0;        // V per pi of phase
    double gain_p = 0.0;      // rad per unit normalized DC
    double gain_i = 0.5;      // rad per unit normalized DC per iteration
    std::size_t dc_window = 10000;
    double tolerance = 1e-3;  // |DC| / (I_LO * fringe amplitude)
    std::size_t max_iterations = 200;
    double v_max = 10.0;      // actuator rail, V
    double probe_phase = 0.05;  // rad, polarity calibration step

    void validate() const;
};

struct ControllerState {
    double control_voltage = 0.0;
    double bias_phase = 0.0;  // phase at zero control voltage
    double phase = 0.0;       // bias_phase + pi * V / v_pi
    double integral_accumulator = 0.0;
    std::size_t iteration = 0;
    bool converged = false;
    /// Sign of d(DC)/d(phase) at the operating point.
    int loop_polarity = -1;
    /// DC scale used to normalize measurements (I_LO * fringe amplitude).
    double dc_reference = 1.0;

    static ControllerState initial(double bias_phase, double dc_reference, int loop_polarity);
};

/// The simulated plant: interferometer, LO and noise source. The controller
/// can only choose the phase at which a measurement is taken.
class SimulationEnvironment {
   public:
    SimulationEnvironment(InterferometerConfig interferometer, LocalOscillator lo, SamplerConfig sampler);

    const InterferometerConfig &interferometer() const { return interferometer_; }
    const LocalOscillator &lo() const { return lo_; }
    const SamplerConfig &sampler() const { return sampler_; }

    /// Mean of `window` fresh difference-current samples at `phase`. Draw
    /// `measurement` selects an independent noise realization.
    double measure(double phase, std::uint64_t measurement, std::size_t window) const;

    /// Noise-free expectation of measure().
    double expected_dc(double phase) const;
    /// I_LO * |fringe amplitude|.
    double dc_reference() const;
    /// Analytic balance root (throws the balance_phase errors).
    PhaseDelay analytic_root() const;

   private:
    InterferometerConfig interferometer_;
    LocalOscillator lo_;
    SamplerConfig sampler_;
};

double measure_dc(const SimulationEnvironment &env, const ControllerState &state, const ControllerConfig &config);

/// One PI update from a DC measurement taken at state.phase.
ControllerState step(const ControllerState &state, double measured_dc, const ControllerConfig &config);

struct TraceEntry {
    std::size_t iteration = 0;
    double voltage = 0.0;
    double phase = 0.0;
    double dc_mean = 0.0;
};

struct BalanceResult {
    ControllerState state;
    std::vector<TraceEntry> trace;
    PhaseDelay analytic_root;
};

/// Closed-loop balancing from the environment's bias phase. Throws the
/// balance_phase errors for unbalanceable configurations; non-convergence is
/// reported through state.converged == false.
BalanceResult run_until_balanced(const SimulationEnvironment &env, const ControllerConfig &config);

}  // namespace qnoise

#endif
