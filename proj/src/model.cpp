#include "deltagain/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace deltagain {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDetuningConstraintTol = 1e-12;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

void require_nonnegative(double v, const char* name) {
    require_finite(v, name);
    if (v < 0.0) {
        throw std::invalid_argument(std::string(name) + " must be >= 0, got " +
                                    std::to_string(v));
    }
}

} // namespace

DecayRates::DecayRates(double gamma1_, double gamma2_, double gamma3_)
    : gamma1(gamma1_), gamma2(gamma2_), gamma3(gamma3_) {
    require_nonnegative(gamma1, "gamma1");
    require_nonnegative(gamma2, "gamma2");
    require_nonnegative(gamma3, "gamma3");
}

DriveSet::DriveSet(double g1_, double g2_, double g3_,
                   double phi1_, double phi2_, double phi3_,
                   double delta1_, double delta2_, double delta3_)
    : g1(g1_), g2(g2_), g3(g3_),
      phi1(phi1_), phi2(phi2_), phi3(phi3_),
      delta1(delta1_), delta2(delta2_), delta3(delta3_) {
    require_nonnegative(g1, "g1");
    require_nonnegative(g2, "g2");
    require_nonnegative(g3, "g3");
    require_finite(phi1, "phi1");
    require_finite(phi2, "phi2");
    require_finite(phi3, "phi3");
    require_finite(delta1, "delta1");
    require_finite(delta2, "delta2");
    require_finite(delta3, "delta3");
    const double mismatch = std::abs(delta1 - (delta2 + delta3));
    if (mismatch > kDetuningConstraintTol) {
        throw std::invalid_argument(
            "loop detuning constraint delta1 = delta2 + delta3 violated by " +
            std::to_string(mismatch));
    }
}

double DriveSet::relative_phase() const noexcept {
    double phi = std::fmod(phi2 + phi3 - phi1, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    return phi;
}

LabFrameSpec::LabFrameSpec(double e1_, double e2_, double e3_,
                           double w31_, double w21_, double w32_)
    : e1(e1_), e2(e2_), e3(e3_), w31(w31_), w21(w21_), w32(w32_) {
    require_finite(e1, "e1");
    require_finite(e2, "e2");
    require_finite(e3, "e3");
    require_finite(w31, "w31");
    require_finite(w21, "w21");
    require_finite(w32, "w32");
    if (!(e3 > e2 && e2 > e1)) {
        throw std::invalid_argument("level ordering e3 > e2 > e1 required");
    }
}

DriveSet build_config(ConfigurationKind kind, double g_coupling, double g_probe,
                      double g_aux, double Phi, double detuning) {
    require_nonnegative(g_coupling, "g_coupling");
    require_nonnegative(g_probe, "g_probe");
    require_nonnegative(g_aux, "g_aux");
    require_finite(Phi, "Phi");
    require_finite(detuning, "detuning");

    // phi2 = phi3 = 0; the auxiliary drive carries the loop phase.
    const double phi1 = -Phi;
    if (kind == ConfigurationKind::A) {
        // coupling g3 resonant on 2<->3, probe g2 and auxiliary g1 share the detuning
        return DriveSet(g_aux, g_probe, g_coupling, phi1, 0.0, 0.0,
                        detuning, detuning, 0.0);
    }
    // coupling g2 resonant on 1<->2, probe g3 and auxiliary g1 share the detuning
    return DriveSet(g_aux, g_coupling, g_probe, phi1, 0.0, 0.0,
                    detuning, 0.0, detuning);
}

Detunings detunings_from_lab(const LabFrameSpec& spec) {
    return Detunings{spec.e3 - spec.e1 - spec.w31,
                     spec.e2 - spec.e1 - spec.w21,
                     spec.e3 - spec.e2 - spec.w32};
}

Eigen::Matrix3cd rho_from_sigma(const SigmaState& state, const DriveSet& drives) {
    using namespace std::complex_literals;
    const std::complex<double> rho12 = state.s12 * std::exp(1i * (drives.phi3 - drives.phi1));
    const std::complex<double> rho13 = state.s13 * std::exp(-1i * drives.phi1);
    const std::complex<double> rho23 = state.s23 * std::exp(-1i * drives.phi3);

    Eigen::Matrix3cd rho;
    rho << state.s11, rho12, rho13,
           std::conj(rho12), state.s22, rho23,
           std::conj(rho13), std::conj(rho23), state.s33();
    return rho;
}

} // namespace deltagain
