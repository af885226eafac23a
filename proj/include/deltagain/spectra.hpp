// spectra.hpp — Probe gain/absorption observables, detuning scans, and the
// steady-state decomposition of the gain into population and coherence parts.

#pragma once

#include <vector>

#include "deltagain/dynamics.hpp"
#include "deltagain/model.hpp"

namespace deltagain {

struct SpectrumRecord {
    double detuning;
    double gain;
    double pop_diff;
    double s11, s22, s33;
};

struct GainSpectrum {
    ConfigurationKind kind;
    double Phi;
    std::vector<SpectrumRecord> records;  // strictly increasing detunings
};

// One steady-state gain value split per the analytic identity obtained from
// the stationary coherence equation: total = population_term +
// coherence_term, scale = Gamma^2 + Delta^2 of the probed transition.
struct GainDecomposition {
    double population_term;
    double coherence_term;
    double total;
    double scale;
};

// Probe absorption coefficient; negative values signal gain.
// Kind A probes 1<->2: Im(sigma21 e^{-i Phi}). Kind B probes 2<->3: Im(sigma32).
double gain_probe(const SigmaState& state, const DriveSet& drives,
                  ConfigurationKind kind);

// Population difference of the probed transition: s22 - s11 for kind A,
// s33 - s22 for kind B. Negative everywhere means gain without inversion.
double population_inversion(const SigmaState& state, ConfigurationKind kind);

// Valid only at a steady state (residual <= 1e-8); throws NotSteadyError
// otherwise, since the identity holds only with the coherence derivative zero.
GainDecomposition decompose_gain(const SigmaState& state, const DriveSet& drives,
                                 const DecayRates& decays, ConfigurationKind kind);

// Steady-state gain and populations over a uniform probe-detuning grid.
// DegenerateSteadyStateError from the solver is rethrown with the offending
// detuning attached.
GainSpectrum scan_detuning(ConfigurationKind kind, double g_coupling,
                           double g_probe, double g_aux, double Phi,
                           const DecayRates& decays, double d_min, double d_max,
                           int n_points);

struct Extremum {
    double detuning;
    double gain;
    bool on_boundary;  // discrete minimum sits on the scan edge; not refined
};

// Most negative gain in the spectrum, refined by a quadratic fit through the
// discrete minimum and its neighbours.
Extremum find_extremum(const GainSpectrum& spectrum);

} // namespace deltagain
