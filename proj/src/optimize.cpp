#include "deltagain/optimize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "deltagain/dynamics.hpp"
#include "deltagain/errors.hpp"
#include "deltagain/spectra.hpp"

namespace deltagain {

namespace {

constexpr int kCoarsePoints = 240;
constexpr double kRefineTol = 1e-3;

double gain_at_aux(ConfigurationKind kind, double g_coupling, double g_probe,
                   double Phi, double detuning, const DecayRates& decays,
                   double g_aux) {
    const DriveSet drives =
        build_config(kind, g_coupling, g_probe, g_aux, Phi, detuning);
    return gain_probe(steady_state(drives, decays), drives, kind);
}

} // namespace

AuxScanCurve scan_aux_amplitude(ConfigurationKind kind, double g_coupling,
                                double g_probe, double Phi, double detuning,
                                const DecayRates& decays, double g_max,
                                int n_points) {
    if (!(g_max > 0.0)) {
        throw std::invalid_argument("scan_aux_amplitude needs g_max > 0");
    }
    if (n_points < 2) {
        throw std::invalid_argument("scan_aux_amplitude needs n_points >= 2");
    }

    AuxScanCurve curve;
    curve.kind = kind;
    curve.Phi = Phi;
    curve.detuning = detuning;
    curve.records.reserve(static_cast<std::size_t>(n_points));

    const double step = g_max / (n_points - 1);
    for (int i = 0; i < n_points; ++i) {
        const double g_aux = (i == n_points - 1) ? g_max : i * step;
        curve.records.push_back(
            {g_aux, gain_at_aux(kind, g_coupling, g_probe, Phi, detuning, decays, g_aux)});
    }
    return curve;
}

AuxOptimum optimal_aux_amplitude(ConfigurationKind kind, double g_coupling,
                                 double g_probe, double Phi, double detuning,
                                 const DecayRates& decays,
                                 std::pair<double, double> bracket) {
    const auto [lo, hi] = bracket;
    if (!(lo >= 0.0 && hi > lo)) {
        throw std::invalid_argument("bracket must satisfy 0 <= lo < hi");
    }

    auto f = [&](double g_aux) {
        return gain_at_aux(kind, g_coupling, g_probe, Phi, detuning, decays, g_aux);
    };

    // Coarse grid over the bracket; the discrete minimum must be interior.
    const double step = (hi - lo) / (kCoarsePoints - 1);
    int k = 0;
    double best = f(lo);
    for (int i = 1; i < kCoarsePoints; ++i) {
        const double val = f(lo + i * step);
        if (val < best) {
            best = val;
            k = i;
        }
    }
    if (k == 0 || k == kCoarsePoints - 1) {
        throw BracketingError(
            "no interior gain minimum in bracket [" + std::to_string(lo) + ", " +
            std::to_string(hi) + "]");
    }

    // Golden-section refinement inside the neighbouring grid cells.
    double a = lo + (k - 1) * step;
    double b = lo + (k + 1) * step;
    constexpr double kInvGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2
    double c = b - kInvGolden * (b - a);
    double d = a + kInvGolden * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > kRefineTol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvGolden * (b - a);
            fd = f(d);
        }
    }
    double g_star = 0.5 * (a + b);
    double gain_star = f(g_star);
    if (best < gain_star) {  // keep the grid point if the curve is flat there
        g_star = lo + k * step;
        gain_star = best;
    }
    return AuxOptimum{g_star, gain_star};
}

} // namespace deltagain
