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

#include "qnoise/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qnoise/error.hpp"

namespace qnoise {

double SplitterAngle::transmission() const { return std::cos(alpha); }
double SplitterAngle::reflection() const { return std::sin(alpha); }

SplitterAngle SplitterAngle::symmetric() { return {std::numbers::pi / 4}; }

SplitterAngle SplitterAngle::from_reflectance(double power_reflectance) {
    if (!(power_reflectance >= 0.0 && power_reflectance <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "power reflectance must lie in [0, 1], got " + std::to_string(power_reflectance));
    }
    return {std::asin(std::sqrt(power_reflectance))};
}

double PhaseDelay::canonical() const {
    constexpr double two_pi = 2 * std::numbers::pi;
    double r = std::remainder(phi, two_pi);  // [-pi, pi]
    if (r <= -std::numbers::pi) {
        r += two_pi;
    }
    return r;
}

ArmLosses::ArmLosses(double eta1, double eta2) : eta1_(eta1), eta2_(eta2) {
    auto check = [](double eta, const char *name) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string(name) + " must lie in [0, 1], got " + std::to_string(eta));
        }
    };
    check(eta1, "eta1");
    check(eta2, "eta2");
}

TransferMatrix TransferMatrix::identity() { return {}; }

TransferMatrix TransferMatrix::operator*(const TransferMatrix &b) const {
    return {
        u11 * b.u11 + u12 * b.u21,
        u11 * b.u12 + u12 * b.u22,
        u21 * b.u11 + u22 * b.u21,
        u21 * b.u12 + u22 * b.u22,
    };
}

TransferMatrix TransferMatrix::adjoint() const {
    return {std::conj(u11), std::conj(u21), std::conj(u12), std::conj(u22)};
}

Complex TransferMatrix::determinant() const { return u11 * u22 - u12 * u21; }

double TransferMatrix::max_abs_diff(const TransferMatrix &rhs) const {
    return std::max({std::abs(u11 - rhs.u11), std::abs(u12 - rhs.u12), std::abs(u21 - rhs.u21),
                     std::abs(u22 - rhs.u22)});
}

std::pair<double, double> TransferMatrix::singular_values() const {
    // Eigenvalues of the Hermitian matrix U^dagger U.
    TransferMatrix g = adjoint() * *this;
    double a = g.u11.real();
    double d = g.u22.real();
    double off = std::norm(g.u12);
    double mean = 0.5 * (a + d);
    double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + off));
    double hi = mean + disc;
    double lo = std::max(0.0, mean - disc);
    return {std::sqrt(hi), std::sqrt(lo)};
}

TransferMatrix bs_matrix(SplitterAngle alpha) {
    double c = std::cos(alpha.alpha);
    double s = std::sin(alpha.alpha);
    return {c, s, s, -c};
}

TransferMatrix phase_matrix(PhaseDelay phi) {
    return {std::polar(1.0, phi.phi / 2), 0.0, 0.0, std::polar(1.0, -phi.phi / 2)};
}

TransferMatrix loss_matrix(const ArmLosses &losses) {
    return {losses.eta1(), 0.0, 0.0, losses.eta2()};
}

TransferMatrix compose_transfer(const InterferometerConfig &config) {
    return bs_matrix(config.alpha2) * loss_matrix(config.losses) * phase_matrix(config.phi) * bs_matrix(config.alpha1);
}

TransferMatrix closed_form_elements(SplitterAngle alpha1, SplitterAngle alpha2, PhaseDelay phi) {
    const double c1 = std::cos(alpha1.alpha), s1 = std::sin(alpha1.alpha);
    const double c2 = std::cos(alpha2.alpha), s2 = std::sin(alpha2.alpha);
    const Complex half = std::polar(1.0, phi.phi / 2);
    const Complex minus_half = std::polar(1.0, -phi.phi / 2);
    const Complex e_minus = std::polar(1.0, -phi.phi);
    const Complex e_plus = std::polar(1.0, phi.phi);
    return {
        half * (c1 * c2 + e_minus * s1 * s2),
        half * (s1 * c2 - e_minus * c1 * s2),
        half * (c1 * s2 - e_minus * s1 * c2),
        minus_half * (c1 * c2 + e_plus * s1 * s2),
    };
}

std::pair<Complex, Complex> propagate(const TransferMatrix &u, Complex lo_amplitude, Complex vac_amplitude) {
    return {u.u11 * lo_amplitude + u.u12 * vac_amplitude, u.u21 * lo_amplitude + u.u22 * vac_amplitude};
}

}  // namespace qnoise
