#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "deltagain/errors.hpp"
#include "deltagain/io.hpp"

using namespace deltagain;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

GainSpectrum sample_spectrum() {
    GainSpectrum s;
    s.kind = ConfigurationKind::A;
    s.Phi = 0.0;
    s.records.push_back({-1.0, 0.125, -0.5, 0.6, 0.3, 0.1});
    s.records.push_back({0.0, -0.03125, -0.25, 0.5, 0.25, 0.25});
    s.records.push_back({1.0, 0.0625, -0.75, 0.7, 0.2, 0.1});
    return s;
}

} // namespace

TEST_CASE("parse_phase accepts plain radians and pi fractions") {
    CHECK(parse_phase("0") == 0.0);
    CHECK(parse_phase("1.25") == 1.25);
    CHECK(parse_phase("-2.5e-1") == -0.25);
    CHECK(parse_phase("pi") == kPi);
    CHECK(parse_phase("2pi") == 2 * kPi);
    CHECK(parse_phase("pi/2") == kPi / 2);
    CHECK(parse_phase("3pi/2") == 3 * kPi / 2);
    CHECK(parse_phase("-pi/4") == -kPi / 4);
    CHECK(parse_phase("0.5pi") == 0.5 * kPi);
    CHECK(parse_phase(" pi/2 ") == kPi / 2);
    CHECK_THROWS_AS(parse_phase("two"), std::invalid_argument);
    CHECK_THROWS_AS(parse_phase("pi/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_phase("pi2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_phase(""), std::invalid_argument);
}

TEST_CASE("parse_config reads the reference run") {
    const RunConfig cfg = parse_config(
        "command=spectrum\n"
        "kind=a\n"
        "phi=0\n"
        "g_coupling=10\n"
        "g_probe=0.1\n"
        "g_aux=0.74\n"
        "d_min=-20\n"
        "d_max=20\n"
        "points=1001\n");
    REQUIRE(cfg.command.has_value());
    CHECK(*cfg.command == Command::Spectrum);
    CHECK(*cfg.kind == ConfigurationKind::A);
    CHECK(*cfg.phi == 0.0);
    CHECK(*cfg.g_coupling == 10.0);
    CHECK(*cfg.g_probe == 0.1);
    CHECK(*cfg.g_aux == 0.74);
    CHECK(*cfg.d_min == -20.0);
    CHECK(*cfg.d_max == 20.0);
    CHECK(*cfg.points == 1001);
}

TEST_CASE("parse_config tolerates comments, blanks, and phase literals") {
    const RunConfig cfg = parse_config(
        "# reference ladder run\n"
        "\n"
        "command=steady\n"
        "kind=b   # layout with the coupling on 1<->2\n"
        "phi=3pi/2\n"
        "g_aux=0\n");
    CHECK(*cfg.command == Command::Steady);
    CHECK(*cfg.kind == ConfigurationKind::B);
    CHECK(*cfg.phi == 3 * kPi / 2);
    CHECK(*cfg.g_aux == 0.0);
}

TEST_CASE("parse_config rejects bad input with line and key context") {
    SUBCASE("malformed number") {
        try {
            parse_config("command=spectrum\npoints=abc\n");
            FAIL("expected ConfigParseError");
        } catch (const ConfigParseError& e) {
            CHECK(e.line() == 2);
            CHECK(e.key() == "points");
        }
    }
    SUBCASE("unknown key") {
        try {
            parse_config("command=spectrum\nfrequency=3\n");
            FAIL("expected ConfigParseError");
        } catch (const ConfigParseError& e) {
            CHECK(e.line() == 2);
            CHECK(e.key() == "frequency");
        }
    }
    SUBCASE("missing separator") {
        CHECK_THROWS_AS(parse_config("spectrum\n"), ConfigParseError);
    }
    SUBCASE("bad enum values") {
        CHECK_THROWS_AS(parse_config("kind=c\n"), ConfigParseError);
        CHECK_THROWS_AS(parse_config("command=simulate\n"), ConfigParseError);
        CHECK_THROWS_AS(parse_config("format=xml\n"), ConfigParseError);
    }
}

TEST_CASE("merge_config lets explicit flags win") {
    RunConfig file = parse_config("command=spectrum\nkind=a\npoints=101\nphi=0\n");
    RunConfig flags;
    flags.points = 1001;
    flags.g_aux = 0.74;
    const RunConfig merged = merge_config(file, flags);
    CHECK(*merged.points == 1001);       // overridden
    CHECK(*merged.phi == 0.0);           // kept from file
    CHECK(*merged.g_aux == 0.74);        // added by flags
    CHECK(*merged.command == Command::Spectrum);
}

TEST_CASE("spectrum CSV schema and round trip") {
    const GainSpectrum s = sample_spectrum();
    const std::string csv = format_spectrum_csv(s);

    SUBCASE("header plus one line per record") {
        CHECK(csv.rfind("detuning,gain,pop_diff,s11,s22,s33\n", 0) == 0);
        std::size_t lines = 0;
        for (char c : csv) lines += (c == '\n');
        CHECK(lines == 4);
    }
    SUBCASE("re-parsing recovers the exact values") {
        const GainSpectrum back = parse_spectrum_csv(csv);
        REQUIRE(back.records.size() == s.records.size());
        for (std::size_t i = 0; i < s.records.size(); ++i) {
            CHECK(back.records[i].detuning == s.records[i].detuning);
            CHECK(back.records[i].gain == s.records[i].gain);
            CHECK(back.records[i].pop_diff == s.records[i].pop_diff);
            CHECK(back.records[i].s33 == s.records[i].s33);
        }
    }
    SUBCASE("irrational values survive the round trip exactly") {
        GainSpectrum odd;
        odd.kind = ConfigurationKind::A;
        odd.Phi = 0.0;
        odd.records.push_back({std::sqrt(2.0) - 1.0, -0.21266360857764244,
                               -1.0 / 3.0, 0.1 + 1e-17, 0.3, 0.6});
        const GainSpectrum back = parse_spectrum_csv(format_spectrum_csv(odd));
        CHECK(back.records[0].detuning == odd.records[0].detuning);
        CHECK(back.records[0].gain == odd.records[0].gain);
        CHECK(back.records[0].pop_diff == odd.records[0].pop_diff);
        CHECK(back.records[0].s11 == odd.records[0].s11);
    }
    SUBCASE("empty spectrum gives a header-only file") {
        GainSpectrum empty;
        empty.kind = ConfigurationKind::A;
        empty.Phi = 0.0;
        CHECK(format_spectrum_csv(empty) == "detuning,gain,pop_diff,s11,s22,s33\n");
    }
    SUBCASE("byte-identical output for identical inputs") {
        CHECK(format_spectrum_csv(sample_spectrum()) == csv);
    }
}

TEST_CASE("spectrum JSON mirrors the CSV fields") {
    const GainSpectrum s = sample_spectrum();
    const auto j = nlohmann::json::parse(format_spectrum_json(s));
    CHECK(j["params"]["kind"] == "a");
    CHECK(j["params"]["phi"] == 0.0);
    REQUIRE(j["records"].size() == 3);
    CHECK(j["records"][0]["detuning"] == -1.0);
    CHECK(j["records"][0]["gain"] == 0.125);
    CHECK(j["records"][2]["s33"] == 0.1);
}

TEST_CASE("write_spectrum writes atomically") {
    const fs::path dir = fs::temp_directory_path() / "deltagain_io_test";
    fs::create_directories(dir);
    const fs::path out = dir / "spectrum.csv";

    write_spectrum(sample_spectrum(), OutputFormat::Csv, out);
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == format_spectrum_csv(sample_spectrum()));

    // no stray temporaries left behind
    std::size_t entries = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);

    SUBCASE("failure leaves no partial file") {
        const fs::path bad = dir / "missing_subdir" / "out.csv";
        CHECK_THROWS(write_spectrum(sample_spectrum(), OutputFormat::Csv, bad));
        CHECK(!fs::exists(bad));
    }
    fs::remove_all(dir);
}

TEST_CASE("plot scripts reference the data safely") {
    SUBCASE("plain script plots gain vs detuning") {
        const std::string script = plot_script_for("run.csv");
        CHECK(script.find("plot 'run.csv' skip 1 using 1:2") != std::string::npos);
        CHECK(script.find("set datafile separator ','") != std::string::npos);
    }
    SUBCASE("paths with spaces stay quoted") {
        const std::string script = plot_script_for("my runs/gain sweep.csv");
        CHECK(script.find("'my runs/gain sweep.csv'") != std::string::npos);
    }
    SUBCASE("overlay draws the second spectrum dashed") {
        const std::string script = overlay_plot_script_for("solid.csv", "dashed.csv");
        CHECK(script.find("'solid.csv'") != std::string::npos);
        CHECK(script.find("'dashed.csv'") != std::string::npos);
        CHECK(script.find("dashtype 2") != std::string::npos);
    }
    SUBCASE("emit_plot_script requires the spectrum file to exist") {
        const fs::path dir = fs::temp_directory_path() / "deltagain_plot_test";
        fs::create_directories(dir);
        const fs::path csv = dir / "s.csv";
        CHECK_THROWS(emit_plot_script(csv, dir / "s.gnuplot"));
        write_spectrum(sample_spectrum(), OutputFormat::Csv, csv);
        emit_plot_script(csv, dir / "s.gnuplot");
        CHECK(fs::exists(dir / "s.gnuplot"));
        fs::remove_all(dir);
    }
}

TEST_CASE("aux curve and trajectory formats") {
    AuxScanCurve curve;
    curve.kind = ConfigurationKind::B;
    curve.Phi = kPi / 2;
    curve.detuning = 0.0;
    curve.records.push_back({0.0, 0.01});
    curve.records.push_back({1.0, -0.2});
    const std::string csv = format_aux_curve_csv(curve);
    CHECK(csv.rfind("g_aux,gain\n", 0) == 0);
    const auto j = nlohmann::json::parse(format_aux_curve_json(curve));
    CHECK(j["params"]["kind"] == "b");
    CHECK(j["records"][1]["gain"] == -0.2);

    EvolveResult traj;
    traj.trajectory.push_back({0.0, SigmaState::ground()});
    traj.final_state = SigmaState::ground();
    const std::string tcsv = format_trajectory_csv(traj);
    CHECK(tcsv.rfind("t,s11,s22,s33,re_s12,im_s12,re_s13,im_s13,re_s23,im_s23\n", 0) == 0);
}
