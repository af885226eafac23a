#include "deltagain/io.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "deltagain/errors.hpp"

namespace deltagain {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

double parse_double_or_throw(std::string_view value, int line, const std::string& key) {
    const std::string_view v = trim(value);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigParseError("line " + std::to_string(line) + ": key '" + key +
                                   "': malformed number '" + std::string(v) + "'",
                               line, key);
    }
    return out;
}

int parse_int_or_throw(std::string_view value, int line, const std::string& key) {
    const std::string_view v = trim(value);
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigParseError("line " + std::to_string(line) + ": key '" + key +
                                   "': malformed integer '" + std::string(v) + "'",
                               line, key);
    }
    return out;
}

// full-precision float rendering (shortest form is not used: fixed %.17g
// keeps the column format predictable and round-trips exactly)
std::string fmt_double(double v) {
    std::array<char, 40> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

ordered_json record_json(const SpectrumRecord& r) {
    return ordered_json{{"detuning", r.detuning}, {"gain", r.gain},
                        {"pop_diff", r.pop_diff}, {"s11", r.s11},
                        {"s22", r.s22},           {"s33", r.s33}};
}

std::string gnuplot_quote(const std::filesystem::path& path) {
    // gnuplot single-quoted strings escape ' by doubling it
    std::string s = path.string();
    std::string out = "'";
    for (char c : s) {
        out += c;
        if (c == '\'') out += '\'';
    }
    out += '\'';
    return out;
}

} // namespace

double parse_phase(std::string_view text) {
    const std::string_view v = trim(text);
    if (v.empty()) throw std::invalid_argument("empty phase literal");

    const auto pi_pos = v.find("pi");
    if (pi_pos == std::string_view::npos) {
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw std::invalid_argument("malformed phase literal '" + std::string(v) + "'");
        }
        return out;
    }

    std::string_view head = v.substr(0, pi_pos);
    std::string_view tail = v.substr(pi_pos + 2);

    double coef = 1.0;
    if (!head.empty()) {
        if (head == "-") {
            coef = -1.0;
        } else if (head == "+") {
            coef = 1.0;
        } else {
            const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), coef);
            if (ec != std::errc{} || ptr != head.data() + head.size()) {
                throw std::invalid_argument("malformed phase literal '" + std::string(v) + "'");
            }
        }
    }

    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw std::invalid_argument("malformed phase literal '" + std::string(v) + "'");
        }
        tail.remove_prefix(1);
        const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), divisor);
        if (ec != std::errc{} || ptr != tail.data() + tail.size() || divisor == 0.0) {
            throw std::invalid_argument("malformed phase literal '" + std::string(v) + "'");
        }
    }
    return coef * std::numbers::pi / divisor;
}

Command parse_command(std::string_view text) {
    const std::string_view v = trim(text);
    if (v == "steady") return Command::Steady;
    if (v == "spectrum") return Command::Spectrum;
    if (v == "optimize") return Command::Optimize;
    if (v == "aux-scan") return Command::AuxScan;
    if (v == "evolve") return Command::Evolve;
    if (v == "chiral") return Command::Chiral;
    if (v == "fluxqubit") return Command::FluxQubit;
    throw std::invalid_argument("unknown command '" + std::string(v) + "'");
}

ConfigurationKind parse_kind(std::string_view text) {
    const std::string_view v = trim(text);
    if (v == "a" || v == "A") return ConfigurationKind::A;
    if (v == "b" || v == "B") return ConfigurationKind::B;
    throw std::invalid_argument("unknown configuration kind '" + std::string(v) + "' (use a|b)");
}

OutputFormat parse_format(std::string_view text) {
    const std::string_view v = trim(text);
    if (v == "csv") return OutputFormat::Csv;
    if (v == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown output format '" + std::string(v) + "' (use csv|json)");
}

std::string command_name(Command command) {
    switch (command) {
        case Command::Steady: return "steady";
        case Command::Spectrum: return "spectrum";
        case Command::Optimize: return "optimize";
        case Command::AuxScan: return "aux-scan";
        case Command::Evolve: return "evolve";
        case Command::Chiral: return "chiral";
        case Command::FluxQubit: return "fluxqubit";
    }
    return "?";
}

std::string kind_name(ConfigurationKind kind) {
    return kind == ConfigurationKind::A ? "a" : "b";
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigParseError(
                "line " + std::to_string(line_no) + ": expected key=value, got '" +
                    std::string(line) + "'",
                line_no, std::string(line));
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));

        auto number = [&] { return parse_double_or_throw(value, line_no, key); };
        auto phase = [&] {
            try {
                return parse_phase(value);
            } catch (const std::invalid_argument& e) {
                throw ConfigParseError(
                    "line " + std::to_string(line_no) + ": key '" + key + "': " + e.what(),
                    line_no, key);
            }
        };
        auto wrap = [&](auto parser) {
            try {
                return parser(value);
            } catch (const std::invalid_argument& e) {
                throw ConfigParseError(
                    "line " + std::to_string(line_no) + ": key '" + key + "': " + e.what(),
                    line_no, key);
            }
        };

        if (key == "command")          cfg.command = wrap(parse_command);
        else if (key == "kind")        cfg.kind = wrap(parse_kind);
        else if (key == "phi")         cfg.phi = phase();
        else if (key == "phi_left")    cfg.phi_left = phase();
        else if (key == "g_coupling")  cfg.g_coupling = number();
        else if (key == "g_probe")     cfg.g_probe = number();
        else if (key == "g_aux")       cfg.g_aux = number();
        else if (key == "detuning")    cfg.detuning = number();
        else if (key == "d_min")       cfg.d_min = number();
        else if (key == "d_max")       cfg.d_max = number();
        else if (key == "g_max")       cfg.g_max = number();
        else if (key == "bracket_lo")  cfg.bracket_lo = number();
        else if (key == "bracket_hi")  cfg.bracket_hi = number();
        else if (key == "t_final")     cfg.t_final = number();
        else if (key == "rel_tol")     cfg.rel_tol = number();
        else if (key == "eps")         cfg.eps = number();
        else if (key == "gamma1")      cfg.gamma1 = number();
        else if (key == "gamma2")      cfg.gamma2 = number();
        else if (key == "gamma3")      cfg.gamma3 = number();
        else if (key == "t01")         cfg.t01 = number();
        else if (key == "t02")         cfg.t02 = number();
        else if (key == "t12")         cfg.t12 = number();
        else if (key == "gamma_ref")   cfg.gamma_ref = number();
        else if (key == "t_ref")       cfg.t_ref = number();
        else if (key == "points")      cfg.points = parse_int_or_throw(value, line_no, key);
        else if (key == "out")         cfg.out = std::string(value);
        else if (key == "format")      cfg.format = wrap(parse_format);
        else if (key == "plot_script") cfg.plot_script = std::string(value);
        else {
            throw ConfigParseError(
                "line " + std::to_string(line_no) + ": unknown key '" + key + "'",
                line_no, key);
        }
    }
    return cfg;
}

RunConfig merge_config(RunConfig base, const RunConfig& overrides) {
    auto take = [](auto& dst, const auto& src) {
        if (src.has_value()) dst = src;
    };
    take(base.command, overrides.command);
    take(base.kind, overrides.kind);
    take(base.phi, overrides.phi);
    take(base.phi_left, overrides.phi_left);
    take(base.g_coupling, overrides.g_coupling);
    take(base.g_probe, overrides.g_probe);
    take(base.g_aux, overrides.g_aux);
    take(base.detuning, overrides.detuning);
    take(base.d_min, overrides.d_min);
    take(base.d_max, overrides.d_max);
    take(base.g_max, overrides.g_max);
    take(base.bracket_lo, overrides.bracket_lo);
    take(base.bracket_hi, overrides.bracket_hi);
    take(base.t_final, overrides.t_final);
    take(base.rel_tol, overrides.rel_tol);
    take(base.eps, overrides.eps);
    take(base.gamma1, overrides.gamma1);
    take(base.gamma2, overrides.gamma2);
    take(base.gamma3, overrides.gamma3);
    take(base.t01, overrides.t01);
    take(base.t02, overrides.t02);
    take(base.t12, overrides.t12);
    take(base.gamma_ref, overrides.gamma_ref);
    take(base.t_ref, overrides.t_ref);
    take(base.points, overrides.points);
    take(base.out, overrides.out);
    take(base.format, overrides.format);
    take(base.plot_script, overrides.plot_script);
    return base;
}

// ---- serialization ---------------------------------------------------------

std::string format_spectrum_csv(const GainSpectrum& spectrum) {
    std::string out = "detuning,gain,pop_diff,s11,s22,s33\n";
    for (const auto& r : spectrum.records) {
        out += fmt_double(r.detuning);
        out += ',';
        out += fmt_double(r.gain);
        out += ',';
        out += fmt_double(r.pop_diff);
        out += ',';
        out += fmt_double(r.s11);
        out += ',';
        out += fmt_double(r.s22);
        out += ',';
        out += fmt_double(r.s33);
        out += '\n';
    }
    return out;
}

std::string format_spectrum_json(const GainSpectrum& spectrum) {
    ordered_json j;
    j["params"] = {{"kind", kind_name(spectrum.kind)}, {"phi", spectrum.Phi}};
    j["records"] = ordered_json::array();
    for (const auto& r : spectrum.records) {
        j["records"].push_back(record_json(r));
    }
    return j.dump(2) + "\n";
}

std::string format_aux_curve_csv(const AuxScanCurve& curve) {
    std::string out = "g_aux,gain\n";
    for (const auto& r : curve.records) {
        out += fmt_double(r.g_aux);
        out += ',';
        out += fmt_double(r.gain);
        out += '\n';
    }
    return out;
}

std::string format_aux_curve_json(const AuxScanCurve& curve) {
    ordered_json j;
    j["params"] = {{"kind", kind_name(curve.kind)},
                   {"phi", curve.Phi},
                   {"detuning", curve.detuning}};
    j["records"] = ordered_json::array();
    for (const auto& r : curve.records) {
        j["records"].push_back({{"g_aux", r.g_aux}, {"gain", r.gain}});
    }
    return j.dump(2) + "\n";
}

std::string format_trajectory_csv(const EvolveResult& result) {
    std::string out =
        "t,s11,s22,s33,re_s12,im_s12,re_s13,im_s13,re_s23,im_s23\n";
    for (const auto& p : result.trajectory) {
        const SigmaState& s = p.state;
        out += fmt_double(p.t);
        for (double v : {s.s11, s.s22, s.s33(), s.s12.real(), s.s12.imag(),
                         s.s13.real(), s.s13.imag(), s.s23.real(), s.s23.imag()}) {
            out += ',';
            out += fmt_double(v);
        }
        out += '\n';
    }
    return out;
}

std::string format_trajectory_json(const EvolveResult& result) {
    ordered_json j;
    j["records"] = ordered_json::array();
    for (const auto& p : result.trajectory) {
        const SigmaState& s = p.state;
        j["records"].push_back({{"t", p.t},
                                {"s11", s.s11},
                                {"s22", s.s22},
                                {"s33", s.s33()},
                                {"re_s12", s.s12.real()},
                                {"im_s12", s.s12.imag()},
                                {"re_s13", s.s13.real()},
                                {"im_s13", s.s13.imag()},
                                {"re_s23", s.s23.real()},
                                {"im_s23", s.s23.imag()}});
    }
    return j.dump(2) + "\n";
}

std::string format_enantiomer_csv(const EnantiomerReport& report) {
    std::string out = "detuning,gain_left,gain_right,gain_diff\n";
    for (std::size_t i = 0; i < report.left.records.size(); ++i) {
        const auto& l = report.left.records[i];
        const auto& r = report.right.records[i];
        out += fmt_double(l.detuning);
        out += ',';
        out += fmt_double(l.gain);
        out += ',';
        out += fmt_double(r.gain);
        out += ',';
        out += fmt_double(l.gain - r.gain);
        out += '\n';
    }
    return out;
}

std::string format_enantiomer_json(const EnantiomerReport& report) {
    ordered_json j;
    j["params"] = {{"kind", kind_name(report.left.kind)},
                   {"phi_left", report.left.Phi},
                   {"phi_right", report.right.Phi}};
    j["discrimination"] = report.discrimination;
    j["left"] = ordered_json::parse(format_spectrum_json(report.left));
    j["right"] = ordered_json::parse(format_spectrum_json(report.right));
    return j.dump(2) + "\n";
}

GainSpectrum parse_spectrum_csv(std::string_view text) {
    GainSpectrum spectrum;
    spectrum.kind = ConfigurationKind::A;
    spectrum.Phi = 0.0;

    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = (eol == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "detuning,gain,pop_diff,s11,s22,s33") {
                throw ConfigParseError("unexpected CSV header '" + std::string(line) + "'",
                                       1, "header");
            }
            continue;
        }
        std::array<double, 6> vals{};
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (field >= vals.size()) {
                    throw ConfigParseError("too many CSV fields", line_no, "record");
                }
                vals[field] = parse_double_or_throw(line.substr(start, i - start),
                                                    line_no, "record");
                ++field;
                start = i + 1;
            }
        }
        if (field != vals.size()) {
            throw ConfigParseError("expected 6 CSV fields", line_no, "record");
        }
        spectrum.records.push_back(
            {vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]});
    }
    return spectrum;
}

void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");

    static std::mt19937_64 rng{std::random_device{}()};
    const fs::path tmp =
        dir / (path.filename().string() + ".tmp" + std::to_string(rng()));

    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) {
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        }
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        stream.flush();
        if (!stream) {
            stream.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed for '" + path.string() + "'");
        }
    }

    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw std::runtime_error("cannot rename temporary onto '" + path.string() +
                                 "': " + ec.message());
    }
}

void write_spectrum(const GainSpectrum& spectrum, OutputFormat format,
                    const std::filesystem::path& path) {
    const std::string content = (format == OutputFormat::Csv)
                                    ? format_spectrum_csv(spectrum)
                                    : format_spectrum_json(spectrum);
    atomic_write_file(path, content);
}

std::string plot_script_for(const std::filesystem::path& spectrum_csv) {
    std::string out;
    out += "set datafile separator ','\n";
    out += "set xlabel 'probe detuning (units of gamma)'\n";
    out += "set ylabel 'probe gain'\n";
    out += "set grid\n";
    out += "set zeroaxis\n";
    out += "plot " + gnuplot_quote(spectrum_csv) +
           " skip 1 using 1:2 with lines lw 2 title 'gain'\n";
    out += "pause -1\n";
    return out;
}

std::string overlay_plot_script_for(const std::filesystem::path& first_csv,
                                    const std::filesystem::path& second_csv) {
    std::string out;
    out += "set datafile separator ','\n";
    out += "set xlabel 'probe detuning (units of gamma)'\n";
    out += "set ylabel 'probe gain'\n";
    out += "set grid\n";
    out += "set zeroaxis\n";
    out += "plot " + gnuplot_quote(first_csv) +
           " skip 1 using 1:2 with lines lw 2 title 'first', \\\n     " +
           gnuplot_quote(second_csv) +
           " skip 1 using 1:2 with lines lw 2 dashtype 2 title 'second'\n";
    out += "pause -1\n";
    return out;
}

void emit_plot_script(const std::filesystem::path& spectrum_csv,
                      const std::filesystem::path& script_path) {
    if (!std::filesystem::exists(spectrum_csv)) {
        throw std::runtime_error("spectrum file '" + spectrum_csv.string() +
                                 "' does not exist");
    }
    atomic_write_file(script_path, plot_script_for(spectrum_csv));
}

} // namespace deltagain
