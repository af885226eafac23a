// optimize.hpp — One-dimensional search over the auxiliary-field amplitude
// for the most negative steady-state probe gain at fixed phase and detuning.

#pragma once

#include <utility>
#include <vector>

#include "deltagain/model.hpp"

namespace deltagain {

struct AuxScanPoint {
    double g_aux;
    double gain;
};

struct AuxScanCurve {
    ConfigurationKind kind;
    double Phi;
    double detuning;
    std::vector<AuxScanPoint> records;  // strictly increasing g_aux, all >= 0
};

struct AuxOptimum {
    double g_aux;
    double gain;
};

// Steady-state gain on a uniform auxiliary-amplitude grid over [0, g_max].
AuxScanCurve scan_aux_amplitude(ConfigurationKind kind, double g_coupling,
                                double g_probe, double Phi, double detuning,
                                const DecayRates& decays, double g_max,
                                int n_points);

// Locate the most negative gain inside `bracket`: a 240-point coarse grid
// brackets the discrete minimum, then golden-section refines it to 1e-3 in
// g_aux. Deterministic; throws BracketingError when the coarse minimum sits
// on the bracket edge (no interior minimum).
AuxOptimum optimal_aux_amplitude(ConfigurationKind kind, double g_coupling,
                                 double g_probe, double Phi, double detuning,
                                 const DecayRates& decays,
                                 std::pair<double, double> bracket);

} // namespace deltagain
