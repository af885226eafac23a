// applications.hpp — Flux-qubit SI-unit mapping / relaxation-timescale
// estimation, and chiral-discrimination spectra for enantiomer pairs.

#pragma once

#include "deltagain/model.hpp"
#include "deltagain/spectra.hpp"

namespace deltagain {

// Transition-matrix-element moduli of a three-junction flux qubit biased off
// the degeneracy point, using the 0,1,2 labels of the two lowest qubit
// states plus the second excited state. gamma_ref is the measured reference
// relaxation rate (s^-1) belonging to a matrix element of modulus t_ref.
struct FluxQubitParams {
    double t01;
    double t02;
    double t12;
    double gamma_ref;      // s^-1
    double t_ref = 0.66;   // fit of the reference modulus to reported rates

    FluxQubitParams(double t01_, double t02_, double t12_, double gamma_ref_,
                    double t_ref_ = 0.66);
};

struct FluxQubitRates {
    DecayRates si;          // channel rates in s^-1
    DecayRates normalized;  // same rates in units of gamma_unit
    double gamma_unit;      // s^-1; the 2->1 channel rate, the figure unit
};

// Channel rates scale as the squared matrix-element moduli:
// gamma_channel = gamma_ref (|t|/t_ref)^2. Level labels map 0,1,2 -> 1,2,3,
// so t01 feeds the 2->1 channel, t02 the 3->1, t12 the 3->2.
FluxQubitRates flux_qubit_rates(const FluxQubitParams& params);

// Relaxation time to the driven steady state in seconds: time_to_steady on
// the gamma_unit-normalized problem (eps = 1e-3), divided by gamma_unit.
// Drive amplitudes and detuning are given in units of gamma_unit.
double si_steady_time(const FluxQubitParams& params, ConfigurationKind kind,
                      double g_coupling, double g_probe, double g_aux,
                      double Phi, double detuning);

struct EnantiomerReport {
    GainSpectrum left;
    GainSpectrum right;
    double discrimination;  // max |gain_left - gain_right| over the shared grid
};

// Gain spectra of an enantiomer pair. Mirror-image molecules see drive
// phase factors of opposite sign, so their loop phases differ by pi: the
// left spectrum is taken at Phi_left, the right at Phi_left - pi, with
// identical amplitudes.
EnantiomerReport enantiomer_spectra(ConfigurationKind kind, double g_coupling,
                                    double g_probe, double g_aux, double Phi_left,
                                    const DecayRates& decays, double d_min,
                                    double d_max, int n_points);

} // namespace deltagain
