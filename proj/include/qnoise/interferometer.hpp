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

#ifndef QNOISE_INTERFEROMETER_HPP
#define QNOISE_INTERFEROMETER_HPP

#include <complex>
#include <utility>

namespace qnoise {

using Complex = std::complex<double>;

/// Beam-splitter parametrization: cos(alpha) is the amplitude transmission,
/// sin(alpha) the amplitude reflection. Any real alpha is accepted.
struct SplitterAngle {
    double alpha = 0.0;

    double transmission() const;
    double reflection() const;

    static SplitterAngle symmetric();
    /// Angle with the given power reflectance r^2 in [0, 1], alpha in [0, pi/2].
    static SplitterAngle from_reflectance(double power_reflectance);
};

/// Relative phase between the interferometer arms. Math always uses the raw
/// value; canonical() is for reporting only.
struct PhaseDelay {
    double phi = 0.0;

    /// phi reduced to (-pi, pi].
    double canonical() const;
};

/// Amplitude transmission of each arm.
class ArmLosses {
   public:
    ArmLosses() = default;
    /// Throws Error(InvalidArgument) unless both values lie in [0, 1].
    ArmLosses(double eta1, double eta2);

    double eta1() const { return eta1_; }
    double eta2() const { return eta2_; }
    bool lossless() const { return eta1_ == 1.0 && eta2_ == 1.0; }

   private:
    double eta1_ = 1.0;
    double eta2_ = 1.0;
};

/// 2x2 complex matrix acting on (LO, vacuum) input amplitudes.
struct TransferMatrix {
    Complex u11{1.0, 0.0};
    Complex u12{0.0, 0.0};
    Complex u21{0.0, 0.0};
    Complex u22{1.0, 0.0};

    static TransferMatrix identity();

    TransferMatrix operator*(const TransferMatrix &rhs) const;
    TransferMatrix adjoint() const;
    Complex determinant() const;
    /// Largest elementwise modulus of (this - rhs).
    double max_abs_diff(const TransferMatrix &rhs) const;
    /// Singular values, largest first.
    std::pair<double, double> singular_values() const;
};

struct InterferometerConfig {
    SplitterAngle alpha1 = SplitterAngle::symmetric();
    SplitterAngle alpha2 = SplitterAngle::symmetric();
    PhaseDelay phi{};
    ArmLosses losses{};
};

TransferMatrix bs_matrix(SplitterAngle alpha);
TransferMatrix phase_matrix(PhaseDelay phi);
TransferMatrix loss_matrix(const ArmLosses &losses);

/// M_BS2 * diag(eta1, eta2) * M_Ph * M_BS1.
TransferMatrix compose_transfer(const InterferometerConfig &config);

/// Analytic lossless elements. Independent of compose_transfer; the two are
/// cross-checked in tests.
TransferMatrix closed_form_elements(SplitterAngle alpha1, SplitterAngle alpha2, PhaseDelay phi);

/// Output fields (E_out1, E_out2) for the given input amplitudes.
std::pair<Complex, Complex> propagate(const TransferMatrix &u, Complex lo_amplitude, Complex vac_amplitude);

}  // namespace qnoise

#endif
