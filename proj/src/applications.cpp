#include "deltagain/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "deltagain/dynamics.hpp"

namespace deltagain {

FluxQubitParams::FluxQubitParams(double t01_, double t02_, double t12_,
                                 double gamma_ref_, double t_ref_)
    : t01(t01_), t02(t02_), t12(t12_), gamma_ref(gamma_ref_), t_ref(t_ref_) {
    if (!(t01 > 0.0 && t02 > 0.0 && t12 > 0.0)) {
        throw std::invalid_argument("transition moduli must be > 0");
    }
    if (!(gamma_ref > 0.0)) {
        throw std::invalid_argument("gamma_ref must be > 0");
    }
    if (!(t_ref > 0.0)) {
        throw std::invalid_argument("t_ref must be > 0");
    }
}

FluxQubitRates flux_qubit_rates(const FluxQubitParams& p) {
    auto channel = [&](double t) {
        const double r = t / p.t_ref;
        return p.gamma_ref * r * r;
    };
    const double gamma1 = channel(p.t02);  // 3 -> 1
    const double gamma2 = channel(p.t01);  // 2 -> 1, defines the unit
    const double gamma3 = channel(p.t12);  // 3 -> 2

    FluxQubitRates out{DecayRates(gamma1, gamma2, gamma3),
                       DecayRates(gamma1 / gamma2, 1.0, gamma3 / gamma2),
                       gamma2};
    return out;
}

double si_steady_time(const FluxQubitParams& params, ConfigurationKind kind,
                      double g_coupling, double g_probe, double g_aux,
                      double Phi, double detuning) {
    const FluxQubitRates rates = flux_qubit_rates(params);
    const DriveSet drives =
        build_config(kind, g_coupling, g_probe, g_aux, Phi, detuning);
    const double t_gamma =
        time_to_steady(drives, rates.normalized, SigmaState::ground(), 1e-3);
    return t_gamma / rates.gamma_unit;
}

EnantiomerReport enantiomer_spectra(ConfigurationKind kind, double g_coupling,
                                    double g_probe, double g_aux, double Phi_left,
                                    const DecayRates& decays, double d_min,
                                    double d_max, int n_points) {
    EnantiomerReport report;
    report.left = scan_detuning(kind, g_coupling, g_probe, g_aux, Phi_left,
                                decays, d_min, d_max, n_points);
    report.right = scan_detuning(kind, g_coupling, g_probe, g_aux,
                                 Phi_left - std::numbers::pi, decays, d_min,
                                 d_max, n_points);

    double discrimination = 0.0;
    for (std::size_t i = 0; i < report.left.records.size(); ++i) {
        discrimination = std::max(
            discrimination,
            std::abs(report.left.records[i].gain - report.right.records[i].gain));
    }
    report.discrimination = discrimination;
    return report;
}

} // namespace deltagain
