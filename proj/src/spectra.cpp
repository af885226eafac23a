#include "deltagain/spectra.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "deltagain/errors.hpp"

namespace deltagain {

namespace {

using Complex = std::complex<double>;
constexpr Complex kImag{0.0, 1.0};

} // namespace

double gain_probe(const SigmaState& state, const DriveSet& drives,
                  ConfigurationKind kind) {
    if (kind == ConfigurationKind::A) {
        const double Phi = drives.relative_phase();
        // Im(conj(s12) e^{-i Phi}) = -Im(s12 e^{i Phi})
        return -(state.s12 * std::exp(kImag * Phi)).imag();
    }
    return -state.s23.imag();  // Im(sigma32)
}

double population_inversion(const SigmaState& state, ConfigurationKind kind) {
    return kind == ConfigurationKind::A ? state.s22 - state.s11
                                        : state.s33() - state.s22;
}

GainDecomposition decompose_gain(const SigmaState& state, const DriveSet& drives,
                                 const DecayRates& decays, ConfigurationKind kind) {
    constexpr double kSteadyResidualTol = 1e-8;
    const double residual = steady_state_residual(state, drives, decays);
    if (residual > kSteadyResidualTol) {
        throw NotSteadyError(
            "decompose_gain requires a steady state; residual = " +
                std::to_string(residual),
            residual);
    }

    const double Phi = drives.relative_phase();
    const Complex anti_loop = std::exp(-kImag * Phi);

    GainDecomposition out{};
    if (kind == ConfigurationKind::A) {
        const double G12 = decays.gamma12();
        out.scale = G12 * G12 + drives.delta2 * drives.delta2;
        out.population_term =
            drives.g2 * G12 * (state.s11 - state.s22) / out.scale;
        const Complex driven = kImag * drives.g3 * std::conj(state.s13) -
                               kImag * drives.g1 * state.s23;
        out.coherence_term =
            ((G12 - kImag * drives.delta2) * driven * anti_loop / out.scale).imag();
    } else {
        const double G23 = decays.gamma23();
        out.scale = G23 * G23 + drives.delta3 * drives.delta3;
        out.population_term =
            drives.g3 * G23 * (state.s22 - state.s33()) / out.scale;
        const Complex driven = kImag * drives.g1 * state.s12 -
                               kImag * drives.g2 * std::conj(state.s13) * anti_loop;
        out.coherence_term =
            ((G23 - kImag * drives.delta3) * driven / out.scale).imag();
    }
    out.total = out.population_term + out.coherence_term;
    return out;
}

GainSpectrum scan_detuning(ConfigurationKind kind, double g_coupling,
                           double g_probe, double g_aux, double Phi,
                           const DecayRates& decays, double d_min, double d_max,
                           int n_points) {
    if (n_points < 2) {
        throw std::invalid_argument("scan_detuning needs n_points >= 2");
    }
    if (!(d_min < d_max)) {
        throw std::invalid_argument("scan_detuning needs d_min < d_max");
    }

    GainSpectrum spectrum;
    spectrum.kind = kind;
    spectrum.Phi = Phi;
    spectrum.records.reserve(static_cast<std::size_t>(n_points));

    const double step = (d_max - d_min) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        const double detuning = (i == n_points - 1) ? d_max : d_min + i * step;
        const DriveSet drives =
            build_config(kind, g_coupling, g_probe, g_aux, Phi, detuning);
        SigmaState state;
        try {
            state = steady_state(drives, decays);
        } catch (const DegenerateSteadyStateError& e) {
            throw DegenerateSteadyStateError(
                std::string(e.what()) + " at detuning " + std::to_string(detuning),
                e.condition_number(), detuning);
        }
        spectrum.records.push_back({detuning,
                                    gain_probe(state, drives, kind),
                                    population_inversion(state, kind),
                                    state.s11, state.s22, state.s33()});
    }
    return spectrum;
}

Extremum find_extremum(const GainSpectrum& spectrum) {
    const auto& recs = spectrum.records;
    if (recs.size() < 3) {
        throw std::invalid_argument("find_extremum needs at least 3 records");
    }

    std::size_t k = 0;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        if (recs[i].gain < recs[k].gain) k = i;
    }
    if (k == 0 || k == recs.size() - 1) {
        return Extremum{recs[k].detuning, recs[k].gain, true};
    }

    // Quadratic vertex through the minimum and its two neighbours.
    const double h = recs[k + 1].detuning - recs[k].detuning;
    const double f0 = recs[k - 1].gain;
    const double f1 = recs[k].gain;
    const double f2 = recs[k + 1].gain;
    const double curvature = f0 - 2.0 * f1 + f2;
    double x = recs[k].detuning;
    double g = f1;
    if (curvature > 0.0) {
        const double shift = 0.5 * h * (f0 - f2) / curvature;
        x += shift;
        g = f1 - 0.125 * (f0 - f2) * (f0 - f2) / curvature;
    }
    return Extremum{x, g, false};
}

} // namespace deltagain
