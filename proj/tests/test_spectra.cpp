#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "deltagain/dynamics.hpp"
#include "deltagain/errors.hpp"
#include "deltagain/spectra.hpp"
#include "test_support.hpp"

using namespace deltagain;

namespace {

constexpr double kPi = std::numbers::pi;
const DecayRates kUnitDecays(1.0, 1.0, 1.0);

double gain_at(ConfigurationKind kind, double g_aux, double Phi, double detuning,
               double g_probe = 0.1) {
    const DriveSet d = build_config(kind, 10.0, g_probe, g_aux, Phi, detuning);
    return gain_probe(steady_state(d, kUnitDecays), d, kind);
}

} // namespace

TEST_CASE("gain_probe reads the probed coherence") {
    const DriveSet d = build_config(ConfigurationKind::A, 10, 0.1, 0.74, 0.0, -9.98);
    SUBCASE("no coherence, no signal") {
        CHECK(gain_probe(SigmaState::ground(), d, ConfigurationKind::A) == 0.0);
        CHECK(gain_probe(SigmaState::ground(), d, ConfigurationKind::B) == 0.0);
    }
    SUBCASE("kind A at the tuned dip is amplifying") {
        CHECK(gain_at(ConfigurationKind::A, 0.74, 0.0, -9.98) < 0.0);
    }
    SUBCASE("kind B at the tuned dip is amplifying") {
        CHECK(gain_at(ConfigurationKind::B, 0.94, 0.0, 10.04) < 0.0);
    }
    SUBCASE("kind B reads Im(sigma32) = -Im(sigma23)") {
        std::mt19937_64 rng(5);
        const SigmaState s = testing::random_state(rng);
        CHECK(gain_probe(s, d, ConfigurationKind::B) == -s.s23.imag());
    }
}

TEST_CASE("population_inversion per configuration") {
    SUBCASE("ground state, kind A") {
        CHECK(population_inversion(SigmaState::ground(), ConfigurationKind::A) == -1.0);
    }
    SUBCASE("equal populations") {
        SigmaState s;
        s.s11 = 1.0 / 3.0;
        s.s22 = 1.0 / 3.0;
        CHECK(population_inversion(s, ConfigurationKind::A) == 0.0);
        CHECK(population_inversion(s, ConfigurationKind::B) ==
              doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("kind B compares the upper pair") {
        SigmaState s;
        s.s11 = 0.2;
        s.s22 = 0.5;  // s33 = 0.3
        CHECK(population_inversion(s, ConfigurationKind::B) ==
              doctest::Approx(-0.2).epsilon(1e-15));
    }
}

TEST_CASE("gain stays inversionless across the reference scans") {
    // every tuned case of both configurations: population difference < 0
    struct Case { ConfigurationKind kind; double Phi, g_aux; };
    const Case cases[] = {
        {ConfigurationKind::A, 0.0, 0.74},      {ConfigurationKind::A, kPi, 0.74},
        {ConfigurationKind::A, kPi / 2, 1.70},  {ConfigurationKind::A, 3 * kPi / 2, 6.13},
        {ConfigurationKind::B, 0.0, 0.94},      {ConfigurationKind::B, kPi, 0.94},
        {ConfigurationKind::B, kPi / 2, 6.97},  {ConfigurationKind::B, 3 * kPi / 2, 1.52},
    };
    for (const Case& c : cases) {
        const GainSpectrum s = scan_detuning(c.kind, 10, 0.1, c.g_aux, c.Phi,
                                             kUnitDecays, -20, 20, 101);
        for (const auto& r : s.records) {
            CHECK(r.pop_diff < 0.0);
        }
    }
}

TEST_CASE("decompose_gain splits the steady gain exactly") {
    SUBCASE("identity on random steady states, both kinds") {
        std::mt19937_64 rng(61);
        for (int draw = 0; draw < 100; ++draw) {
            const DriveSet d = testing::random_drives(rng);
            const DecayRates g = testing::random_decays(rng);
            const SigmaState s = steady_state(d, g);
            for (ConfigurationKind kind : {ConfigurationKind::A, ConfigurationKind::B}) {
                const GainDecomposition dec = decompose_gain(s, d, g, kind);
                CHECK(std::abs(dec.total - gain_probe(s, d, kind)) < 1e-8);
                CHECK(std::abs(dec.population_term + dec.coherence_term - dec.total) <=
                      1e-8 * std::max(1.0, std::abs(dec.total)));
            }
        }
    }
    SUBCASE("tuned dip: positive population term beaten by the coherence term") {
        const DriveSet d = build_config(ConfigurationKind::A, 10, 0.1, 0.74, 0.0, -9.98);
        const SigmaState s = steady_state(d, kUnitDecays);
        const GainDecomposition dec = decompose_gain(s, d, kUnitDecays, ConfigurationKind::A);
        CHECK(dec.population_term > 0.0);
        CHECK(dec.coherence_term < 0.0);
        CHECK(dec.total < 0.0);
    }
    SUBCASE("ladder limit: only the coupling part of the coherence term survives") {
        const DriveSet d = build_config(ConfigurationKind::A, 10, 0.1, 0.0, 0.0, 0.0);
        const SigmaState s = steady_state(d, kUnitDecays);
        const GainDecomposition dec = decompose_gain(s, d, kUnitDecays, ConfigurationKind::A);
        // with g1 = 0 the term reduces to the g3 sigma31 piece; recompute it
        const double G12 = kUnitDecays.gamma12();
        const std::complex<double> only_g3 =
            (G12 - std::complex<double>(0, 1) * d.delta2) *
            (std::complex<double>(0, 1) * d.g3 * std::conj(s.s13)) / dec.scale;
        CHECK(dec.coherence_term == doctest::Approx(only_g3.imag()).epsilon(1e-12));
        CHECK(std::abs(dec.total) < 2e-3);  // near-transparent on resonance
    }
    SUBCASE("transient states are rejected") {
        const DriveSet d = build_config(ConfigurationKind::A, 10, 0.1, 0.74, 0.0, -9.98);
        CHECK_THROWS_AS(
            decompose_gain(SigmaState::ground(), d, kUnitDecays, ConfigurationKind::A),
            NotSteadyError);
    }
}

TEST_CASE("scan_detuning grids and records") {
    const GainSpectrum s = scan_detuning(ConfigurationKind::A, 10, 0.1, 0.74, 0.0,
                                         kUnitDecays, -20, 20, 81);
    CHECK(s.records.size() == 81);
    CHECK(s.records.front().detuning == -20.0);
    CHECK(s.records.back().detuning == 20.0);
    for (std::size_t i = 1; i < s.records.size(); ++i) {
        CHECK(s.records[i].detuning > s.records[i - 1].detuning);
    }
    for (const auto& r : s.records) {
        CHECK(std::abs(r.s11 + r.s22 + r.s33 - 1.0) < 1e-9);
    }
    CHECK_THROWS_AS(scan_detuning(ConfigurationKind::A, 10, 0.1, 0.74, 0.0,
                                  kUnitDecays, -20, 20, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(scan_detuning(ConfigurationKind::A, 10, 0.1, 0.74, 0.0,
                                  kUnitDecays, 20, -20, 11),
                    std::invalid_argument);
}

TEST_CASE("scan_detuning attaches the offending detuning to solver failures") {
    const DecayRates none(0.0, 0.0, 0.0);
    try {
        scan_detuning(ConfigurationKind::A, 10, 0.1, 0.74, 0.0, none, -1, 1, 3);
        FAIL("expected DegenerateSteadyStateError");
    } catch (const DegenerateSteadyStateError& e) {
        REQUIRE(e.detuning().has_value());
        CHECK(*e.detuning() == -1.0);
    }
}

TEST_CASE("find_extremum refines the discrete minimum") {
    SUBCASE("parabola samples give the exact vertex") {
        GainSpectrum s;
        s.kind = ConfigurationKind::A;
        s.Phi = 0.0;
        for (int i = 0; i <= 20; ++i) {
            const double x = -2.0 + 0.25 * i;
            const double g = 3.0 * (x - 0.37) * (x - 0.37) - 1.0;
            s.records.push_back({x, g, 0, 0, 0, 1});
        }
        const Extremum e = find_extremum(s);
        CHECK(!e.on_boundary);
        CHECK(e.detuning == doctest::Approx(0.37).epsilon(1e-12));
        CHECK(e.gain == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("monotone data flags the boundary") {
        GainSpectrum s;
        s.kind = ConfigurationKind::A;
        s.Phi = 0.0;
        for (int i = 0; i < 5; ++i) {
            s.records.push_back({double(i), -double(i), 0, 0, 0, 1});
        }
        const Extremum e = find_extremum(s);
        CHECK(e.on_boundary);
        CHECK(e.detuning == 4.0);
    }
    SUBCASE("too few records are rejected") {
        GainSpectrum s;
        s.records.push_back({0, 0, 0, 0, 0, 1});
        CHECK_THROWS_AS(find_extremum(s), std::invalid_argument);
    }
}

TEST_CASE("reference dips land where they should") {
    SUBCASE("kind A, phase 0: single dip near -9.98") {
        const GainSpectrum s = scan_detuning(ConfigurationKind::A, 10, 0.1, 0.74,
                                             0.0, kUnitDecays, -20, 20, 1001);
        const Extremum e = find_extremum(s);
        CHECK(!e.on_boundary);
        CHECK(std::abs(e.detuning - (-9.98)) < 0.05);
        CHECK(e.gain < 0.0);
        CHECK(e.gain == doctest::Approx(-0.2127).epsilon(0.01));
    }
    SUBCASE("kind B, phase 3pi/2: symmetric dips near +-12.92") {
        const GainSpectrum full = scan_detuning(ConfigurationKind::B, 10, 0.1, 1.52,
                                                3 * kPi / 2, kUnitDecays, -20, 20, 1001);
        GainSpectrum left{full.kind, full.Phi, {}};
        GainSpectrum right{full.kind, full.Phi, {}};
        for (const auto& r : full.records) {
            (r.detuning < 0 ? left : right).records.push_back(r);
        }
        const Extremum el = find_extremum(left);
        const Extremum er = find_extremum(right);
        CHECK(std::abs(el.detuning - (-12.92)) < 0.1);
        CHECK(std::abs(er.detuning - 12.92) < 0.1);
    }
}

TEST_CASE("phase periodicity: whole turns reproduce the spectrum bit for bit") {
    const GainSpectrum a = scan_detuning(ConfigurationKind::A, 10, 0.1, 1.70,
                                         kPi / 2, kUnitDecays, -15, 15, 61);
    const GainSpectrum b = scan_detuning(ConfigurationKind::A, 10, 0.1, 1.70,
                                         kPi / 2 + 2 * kPi, kUnitDecays, -15, 15, 61);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].gain == b.records[i].gain);
        CHECK(a.records[i].s11 == b.records[i].s11);
    }
}

TEST_CASE("mirror relation: opposite phase mirrors the detuning axis") {
    const GainSpectrum plus = scan_detuning(ConfigurationKind::A, 10, 0.1, 0.74,
                                            0.0, kUnitDecays, -20, 20, 401);
    const GainSpectrum minus = scan_detuning(ConfigurationKind::A, 10, 0.1, 0.74,
                                             kPi, kUnitDecays, -20, 20, 401);
    const std::size_t n = plus.records.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(plus.records[i].gain - minus.records[n - 1 - i].gain) < 1e-8);
    }
}

TEST_CASE("weak-probe limit: dip gain becomes probe-independent") {
    // The probed coherence is dominated by the two-photon term driven by the
    // coupling and auxiliary fields, so gain(2x)/gain(x) -> 1 as the probe
    // weakens (not 2: the response is not amplitude-linear in the probe).
    const double dip = -9.98;
    const double r_small = gain_at(ConfigurationKind::A, 0.74, 0.0, dip, 0.01) /
                           gain_at(ConfigurationKind::A, 0.74, 0.0, dip, 0.005);
    const double r_big = gain_at(ConfigurationKind::A, 0.74, 0.0, dip, 0.1) /
                         gain_at(ConfigurationKind::A, 0.74, 0.0, dip, 0.05);
    CHECK(std::abs(r_small - 1.0) < std::abs(r_big - 1.0));
    CHECK(std::abs(r_small - 1.0) < 1e-2);
}
