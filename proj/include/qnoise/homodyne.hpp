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

#ifndef QNOISE_HOMODYNE_HPP
#define QNOISE_HOMODYNE_HPP

#include "qnoise/interferometer.hpp"

namespace qnoise {

/// Classical local-oscillator amplitude E_LO = eps_real + i*eps_imag in
/// square-root-of-intensity units.
class LocalOscillator {
   public:
    LocalOscillator() = default;
    LocalOscillator(double eps_real, double eps_imag);

    static LocalOscillator real(double eps_real) { return {eps_real, 0.0}; }
    static LocalOscillator from_intensity(double intensity, double phase = 0.0);

    double eps_real() const { return eps_real_; }
    double eps_imag() const { return eps_imag_; }
    double intensity() const { return intensity_; }
    Complex amplitude() const { return {eps_real_, eps_imag_}; }
    /// Same phase, amplitude rescaled to the given intensity.
    LocalOscillator with_intensity(double intensity) const;

   private:
    double eps_real_ = 0.0;
    double eps_imag_ = 0.0;
    double intensity_ = 0.0;
};

/// One realization of the vacuum quadratures, E_vac = x + i*y.
struct QuadratureSample {
    double x = 0.0;
    double y = 0.0;
};

/// Decomposition of the difference photocurrent j1 - j2:
///
///   c_sum  * (I_LO + x^2 + y^2)
/// + c_diff * (I_LO - x^2 - y^2)
/// + c_x    * (eps' x + eps'' y)
/// + c_y    * (eps' y - eps'' x)
///
/// For a real LO (eps'' = 0) the last two terms are c_x eps' x and c_y eps' y.
struct DifferenceCurrentCoefficients {
    double c_sum = 0.0;
    double c_diff = 0.0;
    double c_x = 0.0;
    double c_y = 0.0;

    /// Coefficient of I_LO in the expected current.
    double intensity_coefficient() const { return c_sum + c_diff; }
    /// Coefficient of (x^2 + y^2).
    double vacuum_coefficient() const { return c_sum - c_diff; }
};

/// Lossless interferometer, arbitrary splitters. c_sum is identically zero.
DifferenceCurrentCoefficients general_coeffs(SplitterAngle alpha1, SplitterAngle alpha2, PhaseDelay phi);

/// Lossy interferometer with a symmetric first splitter (alpha1 = pi/4).
DifferenceCurrentCoefficients lossy_coeffs(SplitterAngle alpha2, PhaseDelay phi, const ArmLosses &losses);

/// Exact decomposition for an arbitrary transfer matrix, lossy or not.
DifferenceCurrentCoefficients coeffs_from_transfer(const TransferMatrix &u);

/// Semiclassical difference current for one quadrature realization.
double difference_current(const DifferenceCurrentCoefficients &coeffs, const LocalOscillator &lo,
                          const QuadratureSample &sample);

/// Phase that nulls the I_LO term for a symmetric first splitter, taking the
/// root nearest pi/2. Throws Error(Degenerate) when eta1*eta2 = 0 or
/// sin(2*alpha2) = 0, and Error(Unbalanceable) when no real root exists.
PhaseDelay balance_phase(SplitterAngle alpha2, const ArmLosses &losses);

/// Same for an arbitrary first splitter.
PhaseDelay balance_phase(SplitterAngle alpha1, SplitterAngle alpha2, const ArmLosses &losses);

/// I_LO coefficient of the expected difference current as a function of phase
/// (c_sum + c_diff), closed form for arbitrary splitters and losses.
double intensity_coefficient(SplitterAngle alpha1, SplitterAngle alpha2, PhaseDelay phi, const ArmLosses &losses);

/// Amplitude of the cos(phi) fringe in the I_LO coefficient:
/// eta1*eta2*sin(2 alpha1)*sin(2 alpha2).
double fringe_amplitude(SplitterAngle alpha1, SplitterAngle alpha2, const ArmLosses &losses);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance of the difference current when x and y are independent
/// zero-mean Gaussians with variance sigma2 each.
Moments analytic_moments(const DifferenceCurrentCoefficients &coeffs, const LocalOscillator &lo, double sigma2);

}  // namespace qnoise

#endif
