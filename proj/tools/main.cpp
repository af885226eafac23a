// main.cpp — deltagain command-line interface.
//
// Subcommands: steady | spectrum | optimize | aux-scan | evolve | chiral |
// fluxqubit. Every quantity is in units of the reference decay rate gamma,
// except the fluxqubit command, which maps to SI via the qubit parameters.
// A key=value file can preload any flag (--config); explicit flags win.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "deltagain/applications.hpp"
#include "deltagain/dynamics.hpp"
#include "deltagain/errors.hpp"
#include "deltagain/io.hpp"
#include "deltagain/model.hpp"
#include "deltagain/optimize.hpp"
#include "deltagain/spectra.hpp"

namespace {

using namespace deltagain;

// Flag staging: strings for enum/phase-valued flags, numbers for the rest.
struct FlagSet {
    std::optional<std::string> kind, phi, phi_left, format, out, plot_script;
    std::optional<double> g_coupling, g_probe, g_aux, detuning, d_min, d_max,
        g_max, bracket_lo, bracket_hi, t_final, rel_tol, eps, gamma1, gamma2,
        gamma3, t01, t02, t12, gamma_ref, t_ref;
    std::optional<int> points;
};

RunConfig to_run_config(const FlagSet& f) {
    RunConfig cfg;
    if (f.kind) cfg.kind = parse_kind(*f.kind);
    if (f.phi) cfg.phi = parse_phase(*f.phi);
    if (f.phi_left) cfg.phi_left = parse_phase(*f.phi_left);
    if (f.format) cfg.format = parse_format(*f.format);
    cfg.out = f.out;
    cfg.plot_script = f.plot_script;
    cfg.g_coupling = f.g_coupling;
    cfg.g_probe = f.g_probe;
    cfg.g_aux = f.g_aux;
    cfg.detuning = f.detuning;
    cfg.d_min = f.d_min;
    cfg.d_max = f.d_max;
    cfg.g_max = f.g_max;
    cfg.bracket_lo = f.bracket_lo;
    cfg.bracket_hi = f.bracket_hi;
    cfg.t_final = f.t_final;
    cfg.rel_tol = f.rel_tol;
    cfg.eps = f.eps;
    cfg.gamma1 = f.gamma1;
    cfg.gamma2 = f.gamma2;
    cfg.gamma3 = f.gamma3;
    cfg.t01 = f.t01;
    cfg.t02 = f.t02;
    cfg.t12 = f.t12;
    cfg.gamma_ref = f.gamma_ref;
    cfg.t_ref = f.t_ref;
    cfg.points = f.points;
    return cfg;
}

template <typename T>
T required(const std::optional<T>& field, const char* key, Command command) {
    if (!field) {
        throw std::invalid_argument("missing required key '" + std::string(key) +
                                    "' for command '" + command_name(command) + "'");
    }
    return *field;
}

DecayRates decays_from(const RunConfig& cfg) {
    return DecayRates(cfg.gamma1.value_or(1.0), cfg.gamma2.value_or(1.0),
                      cfg.gamma3.value_or(1.0));
}

void deliver(const RunConfig& cfg, const std::string& csv, const std::string& json) {
    const OutputFormat format = cfg.format.value_or(OutputFormat::Csv);
    const std::string& content = (format == OutputFormat::Csv) ? csv : json;
    if (cfg.out && *cfg.out != "-") {
        atomic_write_file(*cfg.out, content);
    } else {
        std::cout << content;
    }
}

int run_steady(const RunConfig& cfg) {
    const Command me = Command::Steady;
    const auto kind = required(cfg.kind, "kind", me);
    const double detuning = required(cfg.detuning, "detuning", me);
    const DriveSet drives = build_config(
        kind, required(cfg.g_coupling, "g_coupling", me),
        required(cfg.g_probe, "g_probe", me), required(cfg.g_aux, "g_aux", me),
        required(cfg.phi, "phi", me), detuning);
    const DecayRates decays = decays_from(cfg);

    const SigmaState state = steady_state(drives, decays);
    GainSpectrum one;
    one.kind = kind;
    one.Phi = required(cfg.phi, "phi", me);
    one.records.push_back({detuning, gain_probe(state, drives, kind),
                           population_inversion(state, kind), state.s11,
                           state.s22, state.s33()});
    deliver(cfg, format_spectrum_csv(one), format_spectrum_json(one));
    return 0;
}

int run_spectrum(const RunConfig& cfg) {
    const Command me = Command::Spectrum;
    const GainSpectrum spectrum = scan_detuning(
        required(cfg.kind, "kind", me), required(cfg.g_coupling, "g_coupling", me),
        required(cfg.g_probe, "g_probe", me), required(cfg.g_aux, "g_aux", me),
        required(cfg.phi, "phi", me), decays_from(cfg),
        required(cfg.d_min, "d_min", me), required(cfg.d_max, "d_max", me),
        required(cfg.points, "points", me));
    deliver(cfg, format_spectrum_csv(spectrum), format_spectrum_json(spectrum));
    if (cfg.plot_script) {
        if (!cfg.out || cfg.format.value_or(OutputFormat::Csv) != OutputFormat::Csv) {
            throw std::invalid_argument("--plot-script needs a CSV written via --out");
        }
        emit_plot_script(*cfg.out, *cfg.plot_script);
    }
    return 0;
}

int run_optimize(const RunConfig& cfg) {
    const Command me = Command::Optimize;
    const AuxOptimum opt = optimal_aux_amplitude(
        required(cfg.kind, "kind", me), required(cfg.g_coupling, "g_coupling", me),
        required(cfg.g_probe, "g_probe", me), required(cfg.phi, "phi", me),
        required(cfg.detuning, "detuning", me), decays_from(cfg),
        {required(cfg.bracket_lo, "bracket_lo", me),
         required(cfg.bracket_hi, "bracket_hi", me)});

    AuxScanCurve result;
    result.kind = required(cfg.kind, "kind", me);
    result.Phi = required(cfg.phi, "phi", me);
    result.detuning = required(cfg.detuning, "detuning", me);
    result.records.push_back({opt.g_aux, opt.gain});
    deliver(cfg, format_aux_curve_csv(result), format_aux_curve_json(result));
    return 0;
}

int run_aux_scan(const RunConfig& cfg) {
    const Command me = Command::AuxScan;
    const AuxScanCurve curve = scan_aux_amplitude(
        required(cfg.kind, "kind", me), required(cfg.g_coupling, "g_coupling", me),
        required(cfg.g_probe, "g_probe", me), required(cfg.phi, "phi", me),
        required(cfg.detuning, "detuning", me), decays_from(cfg),
        required(cfg.g_max, "g_max", me), required(cfg.points, "points", me));
    deliver(cfg, format_aux_curve_csv(curve), format_aux_curve_json(curve));
    return 0;
}

int run_evolve(const RunConfig& cfg) {
    const Command me = Command::Evolve;
    const DriveSet drives = build_config(
        required(cfg.kind, "kind", me), required(cfg.g_coupling, "g_coupling", me),
        required(cfg.g_probe, "g_probe", me), required(cfg.g_aux, "g_aux", me),
        required(cfg.phi, "phi", me), required(cfg.detuning, "detuning", me));
    const EvolveResult result =
        evolve(SigmaState::ground(), drives, decays_from(cfg),
               required(cfg.t_final, "t_final", me), cfg.rel_tol.value_or(1e-10));
    deliver(cfg, format_trajectory_csv(result), format_trajectory_json(result));
    return 0;
}

int run_chiral(const RunConfig& cfg) {
    const Command me = Command::Chiral;
    const EnantiomerReport report = enantiomer_spectra(
        required(cfg.kind, "kind", me), required(cfg.g_coupling, "g_coupling", me),
        required(cfg.g_probe, "g_probe", me), required(cfg.g_aux, "g_aux", me),
        required(cfg.phi_left, "phi_left", me), decays_from(cfg),
        required(cfg.d_min, "d_min", me), required(cfg.d_max, "d_max", me),
        required(cfg.points, "points", me));
    deliver(cfg, format_enantiomer_csv(report), format_enantiomer_json(report));
    std::cerr << "discrimination = " << report.discrimination << "\n";
    return 0;
}

int run_fluxqubit(const RunConfig& cfg) {
    const Command me = Command::FluxQubit;
    const FluxQubitParams params(
        required(cfg.t01, "t01", me), required(cfg.t02, "t02", me),
        required(cfg.t12, "t12", me), required(cfg.gamma_ref, "gamma_ref", me),
        cfg.t_ref.value_or(0.66));
    const FluxQubitRates rates = flux_qubit_rates(params);
    const double seconds = si_steady_time(
        params, required(cfg.kind, "kind", me),
        required(cfg.g_coupling, "g_coupling", me),
        required(cfg.g_probe, "g_probe", me), required(cfg.g_aux, "g_aux", me),
        required(cfg.phi, "phi", me), required(cfg.detuning, "detuning", me));

    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "gamma1_si,gamma2_si,gamma3_si,gamma_unit,steady_time_s\n"
                  "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  rates.si.gamma1, rates.si.gamma2, rates.si.gamma3,
                  rates.gamma_unit, seconds);

    nlohmann::ordered_json j;
    j["rates_si"] = {{"gamma1", rates.si.gamma1},
                     {"gamma2", rates.si.gamma2},
                     {"gamma3", rates.si.gamma3}};
    j["gamma_unit"] = rates.gamma_unit;
    j["rates_normalized"] = {{"gamma1", rates.normalized.gamma1},
                             {"gamma2", rates.normalized.gamma2},
                             {"gamma3", rates.normalized.gamma3}};
    j["steady_time_s"] = seconds;

    deliver(cfg, buf, j.dump(2) + "\n");
    return 0;
}

int dispatch(const RunConfig& cfg) {
    if (!cfg.command) {
        throw std::invalid_argument(
            "no command given (use a subcommand or command= in --config)");
    }
    switch (*cfg.command) {
        case Command::Steady: return run_steady(cfg);
        case Command::Spectrum: return run_spectrum(cfg);
        case Command::Optimize: return run_optimize(cfg);
        case Command::AuxScan: return run_aux_scan(cfg);
        case Command::Evolve: return run_evolve(cfg);
        case Command::Chiral: return run_chiral(cfg);
        case Command::FluxQubit: return run_fluxqubit(cfg);
    }
    return 1;
}

void add_physics_options(CLI::App* cmd, FlagSet& f, bool with_phi = true) {
    cmd->add_option("--kind", f.kind, "configuration kind: a or b");
    cmd->add_option("--g-coupling", f.g_coupling, "coupling amplitude (gamma units)");
    cmd->add_option("--g-probe", f.g_probe, "probe amplitude (gamma units)");
    cmd->add_option("--g-aux", f.g_aux, "auxiliary amplitude (gamma units)");
    if (with_phi) {
        cmd->add_option("--phi", f.phi, "loop phase in radians; pi literals allowed (e.g. pi/2)");
    }
    cmd->add_option("--gamma1", f.gamma1, "3->1 decay rate (default 1)");
    cmd->add_option("--gamma2", f.gamma2, "2->1 decay rate (default 1)");
    cmd->add_option("--gamma3", f.gamma3, "3->2 decay rate (default 1)");
}

void add_output_options(CLI::App* cmd, FlagSet& f) {
    cmd->add_option("--out", f.out, "output path ('-' = stdout)");
    cmd->add_option("--format", f.format, "csv or json (default csv)");
    cmd->fallthrough();  // lets the parent-level --config appear after the subcommand
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state and time-dependent optical response of a "
                 "loop-driven three-level system"};
    app.require_subcommand(0, 1);

    FlagSet flags;
    std::string config_path;
    app.add_option("--config", config_path, "key=value run-configuration file")
        ->expected(1);

    CLI::App* steady = app.add_subcommand("steady", "single steady-state solve");
    add_physics_options(steady, flags);
    steady->add_option("--detuning", flags.detuning, "probe detuning");
    add_output_options(steady, flags);

    CLI::App* spectrum = app.add_subcommand("spectrum", "gain vs probe detuning");
    add_physics_options(spectrum, flags);
    spectrum->add_option("--d-min", flags.d_min, "scan start");
    spectrum->add_option("--d-max", flags.d_max, "scan end");
    spectrum->add_option("--points", flags.points, "grid size");
    spectrum->add_option("--plot-script", flags.plot_script,
                         "also write a gnuplot script here");
    add_output_options(spectrum, flags);

    CLI::App* optimize = app.add_subcommand(
        "optimize", "best auxiliary amplitude at fixed phase and detuning");
    add_physics_options(optimize, flags);
    optimize->add_option("--detuning", flags.detuning, "probe detuning");
    optimize->add_option("--bracket-lo", flags.bracket_lo, "search bracket start");
    optimize->add_option("--bracket-hi", flags.bracket_hi, "search bracket end");
    add_output_options(optimize, flags);

    CLI::App* aux_scan =
        app.add_subcommand("aux-scan", "gain vs auxiliary amplitude");
    add_physics_options(aux_scan, flags);
    aux_scan->add_option("--detuning", flags.detuning, "probe detuning");
    aux_scan->add_option("--g-max", flags.g_max, "scan end (start is 0)");
    aux_scan->add_option("--points", flags.points, "grid size");
    add_output_options(aux_scan, flags);

    CLI::App* evolve_cmd =
        app.add_subcommand("evolve", "time evolution from the ground state");
    add_physics_options(evolve_cmd, flags);
    evolve_cmd->add_option("--detuning", flags.detuning, "probe detuning");
    evolve_cmd->add_option("--t-final", flags.t_final, "integration horizon (1/gamma)");
    evolve_cmd->add_option("--rel-tol", flags.rel_tol,
                           "stepper tolerance (default 1e-10)");
    add_output_options(evolve_cmd, flags);

    CLI::App* chiral = app.add_subcommand(
        "chiral", "enantiomer pair spectra (loop phases differ by pi)");
    add_physics_options(chiral, flags, /*with_phi=*/false);
    chiral->add_option("--phi-left", flags.phi_left,
                       "loop phase of the left-handed molecule");
    chiral->add_option("--d-min", flags.d_min, "scan start");
    chiral->add_option("--d-max", flags.d_max, "scan end");
    chiral->add_option("--points", flags.points, "grid size");
    add_output_options(chiral, flags);

    CLI::App* fluxqubit = app.add_subcommand(
        "fluxqubit", "SI decay rates and settling time for a flux qubit");
    add_physics_options(fluxqubit, flags);
    fluxqubit->add_option("--detuning", flags.detuning, "probe detuning (gamma units)");
    fluxqubit->add_option("--t01", flags.t01, "0<->1 matrix-element modulus");
    fluxqubit->add_option("--t02", flags.t02, "0<->2 matrix-element modulus");
    fluxqubit->add_option("--t12", flags.t12, "1<->2 matrix-element modulus");
    fluxqubit->add_option("--gamma-ref", flags.gamma_ref,
                          "reference relaxation rate (s^-1)");
    fluxqubit->add_option("--t-ref", flags.t_ref,
                          "reference matrix-element modulus (default 0.66)");
    add_output_options(fluxqubit, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig from_flags = to_run_config(flags);
        if (steady->parsed()) from_flags.command = Command::Steady;
        else if (spectrum->parsed()) from_flags.command = Command::Spectrum;
        else if (optimize->parsed()) from_flags.command = Command::Optimize;
        else if (aux_scan->parsed()) from_flags.command = Command::AuxScan;
        else if (evolve_cmd->parsed()) from_flags.command = Command::Evolve;
        else if (chiral->parsed()) from_flags.command = Command::Chiral;
        else if (fluxqubit->parsed()) from_flags.command = Command::FluxQubit;

        RunConfig from_file;
        if (!config_path.empty()) {
            std::ifstream stream(config_path);
            if (!stream) {
                throw std::runtime_error("cannot read config file '" + config_path + "'");
            }
            std::ostringstream text;
            text << stream.rdbuf();
            from_file = parse_config(text.str());
        }

        return dispatch(merge_config(from_file, from_flags));
    } catch (const std::exception& e) {
        std::cerr << "deltagain: error: " << e.what() << "\n";
        return 1;
    }
}
