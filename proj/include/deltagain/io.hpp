// io.hpp — Run-configuration ingestion (key=value files + flag overrides),
// CSV/JSON writers for scan results, and gnuplot companion scripts.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "deltagain/applications.hpp"
#include "deltagain/dynamics.hpp"
#include "deltagain/optimize.hpp"
#include "deltagain/spectra.hpp"

namespace deltagain {

enum class Command { Steady, Spectrum, Optimize, AuxScan, Evolve, Chiral, FluxQubit };
enum class OutputFormat { Csv, Json };

// Staged run parameters. Every field is optional at the parse stage;
// require_* accessors enforce presence per command at dispatch time.
struct RunConfig {
    std::optional<Command> command;
    std::optional<ConfigurationKind> kind;
    std::optional<double> phi;
    std::optional<double> phi_left;
    std::optional<double> g_coupling;
    std::optional<double> g_probe;
    std::optional<double> g_aux;
    std::optional<double> detuning;
    std::optional<double> d_min;
    std::optional<double> d_max;
    std::optional<double> g_max;
    std::optional<double> bracket_lo;
    std::optional<double> bracket_hi;
    std::optional<double> t_final;
    std::optional<double> rel_tol;
    std::optional<double> eps;
    std::optional<double> gamma1;
    std::optional<double> gamma2;
    std::optional<double> gamma3;
    std::optional<double> t01;
    std::optional<double> t02;
    std::optional<double> t12;
    std::optional<double> gamma_ref;
    std::optional<double> t_ref;
    std::optional<int> points;
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::optional<std::string> plot_script;
};

// Parse a flat key=value document ('#' starts a comment, blank lines
// ignored). Unknown keys and malformed numbers raise ConfigParseError with
// the line number and key. Phase-valued keys accept "pi/2"-style literals.
RunConfig parse_config(std::string_view text);

// Fields present in `overrides` win over `base` (command-line flags beat
// config-file values).
RunConfig merge_config(RunConfig base, const RunConfig& overrides);

// Radian literal: a plain number, or [coef]pi[/div] as in "pi", "2pi",
// "pi/2", "3pi/2", "-pi/4", "0.5pi".
double parse_phase(std::string_view text);

Command parse_command(std::string_view text);
ConfigurationKind parse_kind(std::string_view text);
OutputFormat parse_format(std::string_view text);

std::string command_name(Command command);
std::string kind_name(ConfigurationKind kind);

// ---- serialization ---------------------------------------------------------

// CSV header is exactly "detuning,gain,pop_diff,s11,s22,s33"; floats carry
// full round-trip precision. Identical inputs give identical bytes.
std::string format_spectrum_csv(const GainSpectrum& spectrum);
std::string format_spectrum_json(const GainSpectrum& spectrum);

std::string format_aux_curve_csv(const AuxScanCurve& curve);
std::string format_aux_curve_json(const AuxScanCurve& curve);

std::string format_trajectory_csv(const EvolveResult& result);
std::string format_trajectory_json(const EvolveResult& result);

std::string format_enantiomer_csv(const EnantiomerReport& report);
std::string format_enantiomer_json(const EnantiomerReport& report);

// Parse a CSV produced by format_spectrum_csv back into records (metadata
// fields are not stored in the CSV and are left defaulted).
GainSpectrum parse_spectrum_csv(std::string_view text);

// Write through a temporary in the destination directory and rename, so a
// failure never leaves a partial file behind.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

void write_spectrum(const GainSpectrum& spectrum, OutputFormat format,
                    const std::filesystem::path& path);

// Self-contained gnuplot script rendering gain vs detuning from a spectrum
// CSV. The overlay variant draws a second spectrum dashed.
std::string plot_script_for(const std::filesystem::path& spectrum_csv);
std::string overlay_plot_script_for(const std::filesystem::path& first_csv,
                                    const std::filesystem::path& second_csv);
void emit_plot_script(const std::filesystem::path& spectrum_csv,
                      const std::filesystem::path& script_path);

} // namespace deltagain
