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

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qnoise/error.hpp"
#include "qnoise/homodyne.hpp"
#include "qnoise/interferometer.hpp"

using namespace qnoise;
using std::numbers::pi;

namespace {

const SplitterAngle kSym = SplitterAngle::symmetric();

// Lossy root nulling the I_LO term, found numerically from the propagated mean.
double oracle_root(double a1, double a2, double e1, double e2) {
    auto f = [&](double phi) { return oracle::difference(oracle::transfer(a1, a2, phi, e1, e2), 1.0, 0.0); };
    return oracle::bisect(f, 0.0, pi);
}

}  // namespace

TEST(LocalOscillator, IntensityIsExact) {
    const LocalOscillator lo(3.0, -4.0);
    EXPECT_EQ(lo.intensity(), 25.0);
    EXPECT_EQ(LocalOscillator::real(2.0).eps_imag(), 0.0);
    const LocalOscillator f = LocalOscillator::from_intensity(16.0, pi / 2);
    EXPECT_NEAR(f.eps_imag(), 4.0, 1e-15);
    EXPECT_NEAR(f.eps_real(), 0.0, 1e-15);
    EXPECT_NEAR(lo.with_intensity(100).eps_real(), 6.0, 1e-14);
    EXPECT_THROW(LocalOscillator::from_intensity(-1.0), Error);
}

TEST(GeneralCoeffs, SymmetricReduction) {
    for (double phi : {0.0, 0.4, pi / 2, 2.5, -1.0}) {
        const auto k = general_coeffs(kSym, kSym, {phi});
        EXPECT_NEAR(k.c_sum, 0.0, 1e-15);
        EXPECT_NEAR(k.c_diff, std::cos(phi), 1e-14);
        EXPECT_NEAR(k.c_y, -2 * std::sin(phi), 1e-14);
        EXPECT_NEAR(k.c_x, 0.0, 1e-14);
    }
}

TEST(GeneralCoeffs, AsymmetricSplitterConstants) {
    const SplitterAngle a2 = SplitterAngle::from_reflectance(0.49);
    const double gain = 2 * std::sqrt(0.49 * 0.51);
    const double skew = 0.51 - 0.49;
    EXPECT_NEAR(std::sin(2 * a2.alpha), 0.99980, 5e-5);
    EXPECT_NEAR(std::cos(2 * a2.alpha), 0.02000, 5e-5);
    for (double phi : {0.0, 0.7, pi / 2, 2.0}) {
        const auto k = general_coeffs(kSym, a2, {phi});
        EXPECT_NEAR(k.c_diff, gain * std::cos(phi), 1e-12);
        EXPECT_NEAR(k.c_y, -2 * gain * std::sin(phi), 1e-12);
        // Sign fixed by direct propagation, see CoefficientFormMatchesPropagation.
        EXPECT_NEAR(k.c_x, 2 * skew, 1e-12);
    }
}

TEST(GeneralCoeffs, MatchesPropagationOracle) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(-pi, pi), amp(-3, 3);
    for (int i = 0; i < 1000; ++i) {
        const double a1 = ang(rng), a2 = ang(rng), phi = ang(rng);
        const LocalOscillator lo(amp(rng), amp(rng));
        const QuadratureSample s{amp(rng), amp(rng)};
        const double got = difference_current(general_coeffs({a1}, {a2}, {phi}), lo, s);
        const double want = oracle::difference(oracle::transfer(a1, a2, phi), lo.amplitude(), {s.x, s.y});
        EXPECT_NEAR(got, want, 1e-10);
    }
}

TEST(LossyCoeffs, Examples) {
    const auto k = lossy_coeffs(kSym, {pi / 2}, {});
    EXPECT_NEAR(k.c_sum, 0, 1e-15);
    EXPECT_NEAR(k.c_diff, 0, 1e-15);
    EXPECT_NEAR(k.c_x, 0, 1e-15);
    EXPECT_NEAR(k.c_y, -2, 1e-15);

    for (double eta : {0.3, 0.77, 1.0}) {
        const auto e = lossy_coeffs(kSym, {1.1}, ArmLosses(eta, eta));
        EXPECT_NEAR(e.c_sum, 0, 1e-15);
        EXPECT_NEAR(e.c_diff, eta * eta * std::cos(1.1), 1e-14);
    }

    const SplitterAngle a2{0.5 * std::acos(-0.02)};
    const auto p = lossy_coeffs(a2, {pi / 2}, ArmLosses(0.9, 0.85));
    EXPECT_NEAR(p.c_sum, -8.75e-4, 1e-12);
}

TEST(LossyCoeffs, LosslessMatchesGeneral) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> ang(-pi, pi);
    for (int i = 0; i < 200; ++i) {
        const SplitterAngle a2{ang(rng)};
        const PhaseDelay phi{ang(rng)};
        const auto l = lossy_coeffs(a2, phi, {});
        const auto g = general_coeffs(kSym, a2, phi);
        EXPECT_NEAR(l.c_sum, g.c_sum, 1e-12);
        EXPECT_NEAR(l.c_diff, g.c_diff, 1e-12);
        EXPECT_NEAR(l.c_x, g.c_x, 1e-12);
        EXPECT_NEAR(l.c_y, g.c_y, 1e-12);
    }
}

TEST(DifferenceCurrent, CoefficientFormMatchesPropagation) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ang(-pi, pi), eta(0, 1), amp(-3, 3);
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 1000; ++i) {
        const double a1 = ang(rng), a2 = ang(rng), phi = ang(rng), e1 = eta(rng), e2 = eta(rng);
        const LocalOscillator lo(amp(rng), amp(rng));
        const QuadratureSample s{amp(rng), amp(rng)};
        const TransferMatrix u = compose_transfer({{a1}, {a2}, {phi}, ArmLosses(e1, e2)});
        const double want = oracle::difference(oracle::transfer(a1, a2, phi, e1, e2), lo.amplitude(), {s.x, s.y});
        EXPECT_NEAR(difference_current(coeffs_from_transfer(u), lo, s), want, 1e-10);

        // The lossy closed form assumes a symmetric first splitter and a real LO.
        const LocalOscillator real_lo = LocalOscillator::real(lo.eps_real());
        const double lossy = difference_current(lossy_coeffs({a2}, {phi}, ArmLosses(e1, e2)), real_lo, s);
        EXPECT_NEAR(lossy, oracle::difference(oracle::transfer(pi / 4, a2, phi, e1, e2), real_lo.amplitude(), {s.x, s.y}),
                    1e-10);
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
}

TEST(DifferenceCurrent, Examples) {
    EXPECT_NEAR(difference_current({0, 0, 0, -2}, LocalOscillator::real(1.0), {0.3, -0.1}), 0.2, 1e-15);
    const DifferenceCurrentCoefficients k{0.1, -0.3, 0.7, 1.9};
    const LocalOscillator lo(2.0, 0.5);
    EXPECT_NEAR(difference_current(k, lo, {0, 0}), (0.1 - 0.3) * lo.intensity(), 1e-14);
}

TEST(DifferenceCurrent, CoefficientBounds) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ang(-pi, pi), eta(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const auto k = lossy_coeffs({ang(rng)}, {ang(rng)}, ArmLosses(eta(rng), eta(rng)));
        EXPECT_LE(std::abs(k.c_diff), 1 + 1e-15);
        EXPECT_LE(std::abs(k.c_x), 2 + 1e-15);
        EXPECT_LE(std::abs(k.c_y), 2 + 1e-15);
    }
}

TEST(DifferenceCurrent, QuadratureGainAtQuadrature) {
    const SplitterAngle a2 = SplitterAngle::from_reflectance(0.49);
    const auto k = general_coeffs(kSym, a2, {pi / 2});
    const double g = 2 * std::sqrt(0.49 * 0.51), s = 0.51 - 0.49;
    EXPECT_NEAR(k.c_x * k.c_x + k.c_y * k.c_y, std::pow(2 * g, 2) + std::pow(2 * s, 2), 1e-12);
}

TEST(BalancePhase, Examples) {
    for (double a2 : {0.3, 0.7, 1.2}) {
        EXPECT_NEAR(balance_phase({a2}, ArmLosses(0.8, 0.8)).phi, pi / 2, 1e-15);
    }
    for (auto [e1, e2] : {std::pair{0.9, 0.85}, {0.5, 1.0}, {1.0, 0.2}}) {
        EXPECT_NEAR(balance_phase(kSym, ArmLosses(e1, e2)).phi, pi / 2, 1e-12);
    }
}

TEST(BalancePhase, LossyAsymmetricOffset) {
    const SplitterAngle a2{0.5 * std::acos(-0.02)};
    const double phi = balance_phase(a2, ArmLosses(0.9, 0.85)).phi;
    const double oracle_phi = oracle_root(pi / 4, a2.alpha, 0.9, 0.85);
    EXPECT_NEAR(phi, oracle_phi, 1e-12);
    const double offset = std::abs(phi - pi / 2) / pi;
    EXPECT_NEAR(offset, 3.6415285e-4, 1e-6);
    // Leading digit and decade agree with 3e-4.
    EXPECT_EQ(std::floor(offset / 1e-4), 3.0);
}

TEST(BalancePhase, NullsIntensityTerm) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ang(0.05, pi / 2 - 0.05), eta(0.5, 1);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const SplitterAngle a1{ang(rng)}, a2{ang(rng)};
        const ArmLosses l(eta(rng), eta(rng));
        PhaseDelay phi;
        try {
            phi = balance_phase(a1, a2, l);
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::Unbalanceable);
            continue;
        }
        ++checked;
        const auto k = coeffs_from_transfer(compose_transfer({a1, a2, phi, l}));
        EXPECT_LE(std::abs(k.intensity_coefficient()), 1e-12);
        EXPECT_NEAR(std::abs(intensity_coefficient(a1, a2, phi, l)), 0.0, 1e-12);
        EXPECT_GE(phi.phi, 0.0);
        EXPECT_LE(phi.phi, pi);
    }
    EXPECT_GT(checked, 500);
}

TEST(BalancePhase, Errors) {
    try {
        balance_phase(SplitterAngle{0.5 * std::acos(-0.5)}, ArmLosses(1.0, 0.1));
        FAIL() << "expected unbalanceable";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Unbalanceable);
    }
    try {
        balance_phase(SplitterAngle{pi / 2}, ArmLosses(0.9, 0.8));
        FAIL() << "expected degenerate";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Degenerate);
    }
    try {
        balance_phase(kSym, ArmLosses(0.0, 0.8));
        FAIL() << "expected degenerate";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Degenerate);
    }
}

TEST(AnalyticMoments, Examples) {
    const LocalOscillator lo = LocalOscillator::real(std::sqrt(400.0));
    const Moments m = analytic_moments({0, 0, 0, -2}, lo, 0.25);
    EXPECT_NEAR(m.mean, 0.0, 1e-15);
    EXPECT_NEAR(m.variance, 400.0, 1e-12);

    const DifferenceCurrentCoefficients k{0.1, 0.4, -0.3, 1.2};
    const Moments z = analytic_moments(k, lo, 0.0);
    EXPECT_EQ(z.variance, 0.0);
    EXPECT_NEAR(z.mean, 0.5 * 400, 1e-12);
    EXPECT_THROW(analytic_moments(k, lo, -0.1), Error);
}

TEST(AnalyticMoments, MonteCarlo) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> c(-1, 1);
    for (int trial = 0; trial < 5; ++trial) {
        const DifferenceCurrentCoefficients k{c(rng), c(rng), 2 * c(rng), 2 * c(rng)};
        const LocalOscillator lo(3 * c(rng), 3 * c(rng));
        const double sigma2 = 0.25 + 0.5 * std::abs(c(rng));
        std::normal_distribution<double> n(0, std::sqrt(sigma2));
        const int draws = 1000000;
        double s = 0, s2 = 0;
        for (int i = 0; i < draws; ++i) {
            const double j = difference_current(k, lo, {n(rng), n(rng)});
            s += j;
            s2 += j * j;
        }
        const double mean = s / draws, var = s2 / draws - mean * mean;
        const Moments m = analytic_moments(k, lo, sigma2);
        EXPECT_NEAR(mean, m.mean, 5 * std::sqrt(m.variance / draws));
        // Standard error of a sample variance, bounded generously by the fourth moment of a near-Gaussian.
        EXPECT_NEAR(var, m.variance, 5 * m.variance * std::sqrt(3.0 / draws) + 1e-12);
    }
}
