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

#include "qnoise/homodyne.hpp"

#include <cmath>
#include <string>

#include "qnoise/error.hpp"

namespace qnoise {

namespace {

// Below this |sin| a splitter (or the interference term) is treated as
// degenerate; sin(2*pi/2) evaluates to ~1.2e-16 in double precision.
constexpr double kDegenerateSine = 1e-12;

}  // namespace

LocalOscillator::LocalOscillator(double eps_real, double eps_imag)
    : eps_real_(eps_real), eps_imag_(eps_imag), intensity_(eps_real * eps_real + eps_imag * eps_imag) {}

LocalOscillator LocalOscillator::from_intensity(double intensity, double phase) {
    if (!(intensity >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "LO intensity must be non-negative");
    }
    double amplitude = std::sqrt(intensity);
    return {amplitude * std::cos(phase), amplitude * std::sin(phase)};
}

LocalOscillator LocalOscillator::with_intensity(double intensity) const {
    if (intensity_ == 0.0) {
        return from_intensity(intensity);
    }
    double scale = std::sqrt(intensity / intensity_);
    return {eps_real_ * scale, eps_imag_ * scale};
}

DifferenceCurrentCoefficients general_coeffs(SplitterAngle alpha1, SplitterAngle alpha2, PhaseDelay phi) {
    const double a_minus = 2 * (alpha1.alpha - alpha2.alpha);
    const double a_plus = 2 * (alpha1.alpha + alpha2.alpha);
    const double c2 = std::cos(phi.phi / 2) * std::cos(phi.phi / 2);
    const double s2 = std::sin(phi.phi / 2) * std::sin(phi.phi / 2);
    DifferenceCurrentCoefficients k;
    k.c_sum = 0.0;
    k.c_diff = c2 * std::cos(a_minus) + s2 * std::cos(a_plus);
    k.c_x = 2 * (c2 * std::sin(a_minus) + s2 * std::sin(a_plus));
    k.c_y = -2 * std::sin(phi.phi) * std::sin(2 * alpha2.alpha);
    return k;
}

DifferenceCurrentCoefficients lossy_coeffs(SplitterAngle alpha2, PhaseDelay phi, const ArmLosses &losses) {
    const double e1 = losses.eta1(), e2 = losses.eta2();
    const double cos2 = std::cos(2 * alpha2.alpha);
    const double sin2 = std::sin(2 * alpha2.alpha);
    DifferenceCurrentCoefficients k;
    k.c_sum = 0.5 * cos2 * (e1 * e1 - e2 * e2);
    k.c_diff = e1 * e2 * sin2 * std::cos(phi.phi);
    k.c_x = cos2 * (e1 * e1 + e2 * e2);
    k.c_y = -2 * e1 * e2 * sin2 * std::sin(phi.phi);
    return k;
}

DifferenceCurrentCoefficients coeffs_from_transfer(const TransferMatrix &u) {
    // j1 - j2 = a|E|^2 + b|v|^2 + 2 Re(c E conj(v)).
    const double a = std::norm(u.u11) - std::norm(u.u21);
    const double b = std::norm(u.u12) - std::norm(u.u22);
    const Complex c = u.u11 * std::conj(u.u12) - u.u21 * std::conj(u.u22);
    return {0.5 * (a + b), 0.5 * (a - b), 2 * c.real(), 2 * c.imag()};
}

double difference_current(const DifferenceCurrentCoefficients &k, const LocalOscillator &lo,
                          const QuadratureSample &s) {
    const double vac = s.x * s.x + s.y * s.y;
    const double ep = lo.eps_real(), epp = lo.eps_imag();
    return k.c_sum * (lo.intensity() + vac) + k.c_diff * (lo.intensity() - vac) + k.c_x * (ep * s.x + epp * s.y) +
           k.c_y * (ep * s.y - epp * s.x);
}

double intensity_coefficient(SplitterAngle alpha1, SplitterAngle alpha2, PhaseDelay phi, const ArmLosses &losses) {
    const double c1 = std::cos(alpha1.alpha), s1 = std::sin(alpha1.alpha);
    const double e1 = losses.eta1(), e2 = losses.eta2();
    return std::cos(2 * alpha2.alpha) * (e1 * e1 * c1 * c1 - e2 * e2 * s1 * s1) +
           fringe_amplitude(alpha1, alpha2, losses) * std::cos(phi.phi);
}

double fringe_amplitude(SplitterAngle alpha1, SplitterAngle alpha2, const ArmLosses &losses) {
    return losses.eta1() * losses.eta2() * std::sin(2 * alpha1.alpha) * std::sin(2 * alpha2.alpha);
}

PhaseDelay balance_phase(SplitterAngle alpha1, SplitterAngle alpha2, const ArmLosses &losses) {
    const double e1 = losses.eta1(), e2 = losses.eta2();
    if (e1 * e2 == 0.0) {
        throw Error(ErrorCode::Degenerate, "balance phase undefined: an arm is opaque (eta1*eta2 = 0)");
    }
    if (std::abs(std::sin(2 * alpha2.alpha)) < kDegenerateSine ||
        std::abs(std::sin(2 * alpha1.alpha)) < kDegenerateSine) {
        throw Error(ErrorCode::Degenerate, "balance phase undefined: a splitter does not split (sin(2 alpha) = 0)");
    }
    const double c1 = std::cos(alpha1.alpha), s1 = std::sin(alpha1.alpha);
    const double offset = std::cos(2 * alpha2.alpha) * (e1 * e1 * c1 * c1 - e2 * e2 * s1 * s1);
    const double rhs = -offset / fringe_amplitude(alpha1, alpha2, losses);
    if (!(std::abs(rhs) <= 1.0)) {
        throw Error(ErrorCode::Unbalanceable,
                    "loss asymmetry too large for phase compensation: required cos(phi) = " + std::to_string(rhs));
    }
    // Roots are +-acos(rhs) + 2 pi k; acos(rhs) in [0, pi] is the one nearest pi/2.
    return {std::acos(rhs)};
}

PhaseDelay balance_phase(SplitterAngle alpha2, const ArmLosses &losses) {
    return balance_phase(SplitterAngle::symmetric(), alpha2, losses);
}

Moments analytic_moments(const DifferenceCurrentCoefficients &k, const LocalOscillator &lo, double sigma2) {
    if (!(sigma2 >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "quadrature variance must be non-negative");
    }
    const double vac = k.vacuum_coefficient();
    Moments m;
    m.mean = k.intensity_coefficient() * lo.intensity() + vac * 2 * sigma2;
    // Var(x^2 + y^2) = 2 * 2 sigma^4; the linear and quadratic terms are uncorrelated.
    m.variance = (k.c_x * k.c_x + k.c_y * k.c_y) * lo.intensity() * sigma2 + vac * vac * 4 * sigma2 * sigma2;
    return m;
}

}  // namespace qnoise
