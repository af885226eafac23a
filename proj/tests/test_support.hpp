// test_support.hpp — shared deterministic generators for property-style tests.

#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "deltagain/model.hpp"

namespace deltagain::testing {

// Random positive unit-trace matrix via G G^dagger, read back as a rotated
// state (any positive unit-trace matrix is a valid sigma: the frame change
// is a diagonal unitary).
inline SigmaState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> norm;
    Eigen::Matrix3cd g;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            g(i, j) = std::complex<double>(norm(rng), norm(rng));
        }
    }
    Eigen::Matrix3cd rho = g * g.adjoint();
    rho /= rho.trace();

    SigmaState s;
    s.s11 = rho(0, 0).real();
    s.s22 = rho(1, 1).real();
    s.s12 = rho(0, 1);
    s.s13 = rho(0, 2);
    s.s23 = rho(1, 2);
    return s;
}

// Amplitudes <= 20, per-field |detuning| <= 20 with the loop constraint
// holding exactly, any loop phase.
inline DriveSet random_drives(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(0.0, 20.0);
    std::uniform_real_distribution<double> det(-10.0, 10.0);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
    const double d2 = det(rng);
    const double d3 = det(rng);
    return DriveSet(amp(rng), amp(rng), amp(rng),
                    phase(rng), phase(rng), phase(rng),
                    d2 + d3, d2, d3);
}

inline DecayRates random_decays(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> rate(0.5, 2.0);
    return DecayRates(rate(rng), rate(rng), rate(rng));
}

// Hermitian reconstruction of the rotated state itself (identity gauge).
inline Eigen::Matrix3cd sigma_matrix(const SigmaState& s) {
    Eigen::Matrix3cd m;
    m << s.s11, s.s12, s.s13,
         std::conj(s.s12), s.s22, s.s23,
         std::conj(s.s13), std::conj(s.s23), s.s33();
    return m;
}

inline double min_eigenvalue(const Eigen::Matrix3cd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(hermitian);
    return solver.eigenvalues().minCoeff();
}

} // namespace deltagain::testing
