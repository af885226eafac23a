// model.hpp — Domain types for a cyclic (loop-driven) three-level system:
// decay rates, drive fields with loop-phase bookkeeping, and the
// lab-frame <-> rotating-frame mapping.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace deltagain {

// All rates, amplitudes and detunings are expressed in units of a reference
// decay rate gamma; SI conversion lives in applications.hpp.

// Per-level decay channels: gamma1 (3->1), gamma2 (2->1), gamma3 (3->2).
// The coherence dephasing rates follow from the channel sums.
struct DecayRates {
    double gamma1;
    double gamma2;
    double gamma3;

    DecayRates(double gamma1_, double gamma2_, double gamma3_);

    double gamma12() const noexcept { return 0.5 * gamma2; }
    double gamma13() const noexcept { return 0.5 * (gamma1 + gamma3); }
    double gamma23() const noexcept { return 0.5 * (gamma1 + gamma2 + gamma3); }
};

// The three coherent drives. g_i are half the Rabi amplitudes; the loop
// constraint delta1 = delta2 + delta3 is enforced at construction
// (absolute tolerance 1e-12).
struct DriveSet {
    double g1, g2, g3;          // 1<->3, 1<->2, 2<->3 half-Rabi amplitudes
    double phi1, phi2, phi3;    // drive phases, radians
    double delta1, delta2, delta3;

    DriveSet(double g1_, double g2_, double g3_,
             double phi1_, double phi2_, double phi3_,
             double delta1_, double delta2_, double delta3_);

    // Loop phase Phi = phi2 + phi3 - phi1, reduced to [0, 2*pi). The rotated
    // equations of motion depend on the phases only through this value.
    double relative_phase() const noexcept;
};

// Bare level energies and drive frequencies, for deriving detunings.
struct LabFrameSpec {
    double e1, e2, e3;     // level energies, e3 > e2 > e1
    double w31, w21, w32;  // drive frequencies on 1<->3, 1<->2, 2<->3

    LabFrameSpec(double e1_, double e2_, double e3_,
                 double w31_, double w21_, double w32_);
};

struct Detunings {
    double delta1, delta2, delta3;
};

// Rotated-frame density matrix: two independent populations plus the three
// upper-triangle coherences. s33 is eliminated by the unit trace.
struct SigmaState {
    double s11 = 1.0;
    double s22 = 0.0;
    std::complex<double> s12{};
    std::complex<double> s13{};
    std::complex<double> s23{};

    double s33() const noexcept { return 1.0 - s11 - s22; }

    static SigmaState ground() noexcept { return SigmaState{}; }
};

// The two drive layouts: in A the strong coupling sits on 2<->3 and the
// probe on 1<->2; in B the coupling sits on 1<->2 and the probe on 2<->3.
// The auxiliary field drives 1<->3 in both.
enum class ConfigurationKind { A, B };

// Assemble the DriveSet for one of the two layouts. The probe and the
// auxiliary field share the detuning; the coupling field is resonant.
// The whole loop phase is carried by the auxiliary drive (phi1 = -Phi).
DriveSet build_config(ConfigurationKind kind, double g_coupling, double g_probe,
                      double g_aux, double Phi, double detuning);

// delta1 = e3 - e1 - w31, delta2 = e2 - e1 - w21, delta3 = e3 - e2 - w32.
Detunings detunings_from_lab(const LabFrameSpec& spec);

// Undo the rotating-frame phase redefinition: rho13 = s13 e^{-i phi1},
// rho23 = s23 e^{-i phi3}, rho12 = s12 e^{i(phi3 - phi1)}, diagonal kept.
// The result is Hermitian with unit trace.
Eigen::Matrix3cd rho_from_sigma(const SigmaState& state, const DriveSet& drives);

} // namespace deltagain
