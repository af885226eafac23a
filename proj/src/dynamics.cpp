#include "deltagain/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "deltagain/errors.hpp"

namespace deltagain {

namespace {

using Complex = std::complex<double>;
constexpr Complex kImag{0.0, 1.0};

} // namespace

StateVector8 pack_state(const SigmaState& s) noexcept {
    StateVector8 v;
    v << s.s11, s.s22,
         s.s12.real(), s.s12.imag(),
         s.s13.real(), s.s13.imag(),
         s.s23.real(), s.s23.imag();
    return v;
}

SigmaState unpack_state(const StateVector8& v) noexcept {
    SigmaState s;
    s.s11 = v[0];
    s.s22 = v[1];
    s.s12 = Complex(v[2], v[3]);
    s.s13 = Complex(v[4], v[5]);
    s.s23 = Complex(v[6], v[7]);
    return s;
}

SigmaState eom_rhs(const SigmaState& state, const DriveSet& d, const DecayRates& g) {
    const double Phi = d.relative_phase();
    const Complex loop = std::exp(kImag * Phi);

    const double s33 = state.s33();
    const Complex s12 = state.s12;
    const Complex s13 = state.s13;
    const Complex s23 = state.s23;

    SigmaState out;
    out.s11 = g.gamma1 * s33 + g.gamma2 * state.s22
            + 2.0 * d.g1 * s13.imag() + 2.0 * d.g2 * (s12 * loop).imag();
    out.s22 = -g.gamma2 * state.s22 + g.gamma3 * s33
            - 2.0 * d.g2 * (s12 * loop).imag() + 2.0 * d.g3 * s23.imag();
    out.s12 = (-g.gamma12() + kImag * d.delta2) * s12
            - kImag * d.g3 * s13 + kImag * d.g1 * std::conj(s23)
            + kImag * d.g2 * std::conj(loop) * (state.s22 - state.s11);
    out.s13 = (-g.gamma13() + kImag * d.delta1) * s13
            + kImag * d.g1 * (s33 - state.s11) + kImag * d.g2 * s23 * std::conj(loop)
            - kImag * d.g3 * s12;
    out.s23 = (-g.gamma23() + kImag * d.delta3) * s23
            + kImag * d.g2 * s13 * loop - kImag * d.g1 * std::conj(s12)
            + kImag * d.g3 * (s33 - state.s22);
    return out;
}

GeneratorMatrix build_generator(const DriveSet& d, const DecayRates& g) {
    const double Phi = d.relative_phase();
    const double cp = std::cos(Phi);
    const double sp = std::sin(Phi);
    const double g1 = d.g1, g2 = d.g2, g3 = d.g3;
    const double ga1 = g.gamma1, ga2 = g.gamma2, ga3 = g.gamma3;
    const double G12 = g.gamma12(), G13 = g.gamma13(), G23 = g.gamma23();
    const double D1 = d.delta1, D2 = d.delta2, D3 = d.delta3;

    GeneratorMatrix gen;
    Eigen::Matrix<double, 8, 8>& A = gen.drift;
    StateVector8& c = gen.constant;
    A.setZero();
    c.setZero();

    // s11' = ga1 (1 - s11 - s22) + ga2 s22 + 2 g1 Im s13 + 2 g2 Im(s12 e^{i Phi})
    A(0, 0) = -ga1;
    A(0, 1) = ga2 - ga1;
    A(0, 2) = 2.0 * g2 * sp;
    A(0, 3) = 2.0 * g2 * cp;
    A(0, 5) = 2.0 * g1;
    c[0] = ga1;

    // s22' = -ga2 s22 + ga3 (1 - s11 - s22) - 2 g2 Im(s12 e^{i Phi}) + 2 g3 Im s23
    A(1, 0) = -ga3;
    A(1, 1) = -(ga2 + ga3);
    A(1, 2) = -2.0 * g2 * sp;
    A(1, 3) = -2.0 * g2 * cp;
    A(1, 7) = 2.0 * g3;
    c[1] = ga3;

    // s12' = (-G12 + i D2) s12 - i g3 s13 + i g1 conj(s23) + i g2 e^{-i Phi} (s22 - s11)
    A(2, 0) = -g2 * sp;
    A(2, 1) = g2 * sp;
    A(2, 2) = -G12;
    A(2, 3) = -D2;
    A(2, 5) = g3;
    A(2, 7) = g1;
    A(3, 0) = -g2 * cp;
    A(3, 1) = g2 * cp;
    A(3, 2) = D2;
    A(3, 3) = -G12;
    A(3, 4) = -g3;
    A(3, 6) = g1;

    // s13' = (-G13 + i D1) s13 + i g1 (1 - 2 s11 - s22) + i g2 e^{-i Phi} s23 - i g3 s12
    A(4, 3) = g3;
    A(4, 4) = -G13;
    A(4, 5) = -D1;
    A(4, 6) = g2 * sp;
    A(4, 7) = -g2 * cp;
    A(5, 0) = -2.0 * g1;
    A(5, 1) = -g1;
    A(5, 2) = -g3;
    A(5, 4) = D1;
    A(5, 5) = -G13;
    A(5, 6) = g2 * cp;
    A(5, 7) = g2 * sp;
    c[5] = g1;

    // s23' = (-G23 + i D3) s23 + i g2 e^{i Phi} s13 - i g1 conj(s12) + i g3 (1 - s11 - 2 s22)
    A(6, 3) = -g1;
    A(6, 4) = -g2 * sp;
    A(6, 5) = -g2 * cp;
    A(6, 6) = -G23;
    A(6, 7) = -D3;
    A(7, 0) = -g3;
    A(7, 1) = -2.0 * g3;
    A(7, 2) = -g1;
    A(7, 4) = g2 * cp;
    A(7, 5) = -g2 * sp;
    A(7, 6) = D3;
    A(7, 7) = -G23;
    c[7] = g3;

    return gen;
}

namespace {

StateVector8 rhs_packed(const GeneratorMatrix& gen, const StateVector8& x) {
    return gen.drift * x + gen.constant;
}

StateVector8 rk4_step(const GeneratorMatrix& gen, const StateVector8& x, double h) {
    const StateVector8 k1 = rhs_packed(gen, x);
    const StateVector8 k2 = rhs_packed(gen, x + 0.5 * h * k1);
    const StateVector8 k3 = rhs_packed(gen, x + 0.5 * h * k2);
    const StateVector8 k4 = rhs_packed(gen, x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advance x from t0 to t1 with step-doubling control; optionally records
// every accepted step through `record`.
template <typename Recorder>
void integrate_adaptive(const GeneratorMatrix& gen, StateVector8& x,
                        double t0, double t1, double rel_tol, Recorder&& record) {
    const double span = t1 - t0;
    double t = t0;
    double h = std::min(0.1, span);
    const double h_min = std::max(span * 1e-14, 1e-300);

    while (t < t1) {
        h = std::min(h, t1 - t);
        const StateVector8 big = rk4_step(gen, x, h);
        const StateVector8 half = rk4_step(gen, rk4_step(gen, x, 0.5 * h), 0.5 * h);

        // Richardson estimate: the halved-step result is in error by ~delta/15.
        double err = 0.0;
        for (int i = 0; i < 8; ++i) {
            const double scale = rel_tol * std::max(1.0, std::abs(half[i]));
            err = std::max(err, std::abs(half[i] - big[i]) / (15.0 * scale));
        }

        if (err <= 1.0) {
            t += h;
            x = half + (half - big) / 15.0;  // 5th-order local extrapolation
            record(t, x);
            const double grow = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (h < h_min) {
            throw IntegrationError(
                "step size underflow at t = " + std::to_string(t), t);
        }
    }
}

} // namespace

EvolveResult evolve(const SigmaState& initial, const DriveSet& drives,
                    const DecayRates& decays, double t_final, double rel_tol) {
    if (!(t_final > 0.0)) {
        throw std::invalid_argument("t_final must be > 0");
    }
    if (!(rel_tol > 1e-14 && rel_tol < 1e-3)) {
        throw std::invalid_argument("rel_tol must lie in (1e-14, 1e-3)");
    }

    const GeneratorMatrix gen = build_generator(drives, decays);
    StateVector8 x = pack_state(initial);

    EvolveResult result;
    result.trajectory.push_back({0.0, initial});
    integrate_adaptive(gen, x, 0.0, t_final, rel_tol, [&](double t, const StateVector8& y) {
        result.trajectory.push_back({t, unpack_state(y)});
    });
    result.final_state = unpack_state(x);
    return result;
}

SigmaState steady_state(const DriveSet& drives, const DecayRates& decays) {
    constexpr double kMaxCondition = 1e12;

    const GeneratorMatrix gen = build_generator(drives, decays);

    const Eigen::JacobiSVD<Eigen::Matrix<double, 8, 8>> svd(gen.drift);
    const double smin = svd.singularValues()[7];
    const double smax = svd.singularValues()[0];
    if (!(smin > 0.0) || smax / smin > kMaxCondition) {
        const double cond = (smin > 0.0) ? smax / smin
                                         : std::numeric_limits<double>::infinity();
        throw DegenerateSteadyStateError(
            "steady-state generator is singular or ill-conditioned (cond = " +
                std::to_string(cond) + ")",
            cond);
    }

    const Eigen::PartialPivLU<Eigen::Matrix<double, 8, 8>> lu(gen.drift);
    StateVector8 x = lu.solve(-gen.constant);
    x += lu.solve(-gen.constant - gen.drift * x);  // one refinement pass
    return unpack_state(x);
}

double steady_state_residual(const SigmaState& state, const DriveSet& drives,
                             const DecayRates& decays) {
    return pack_state(eom_rhs(state, drives, decays)).cwiseAbs().maxCoeff();
}

double time_to_steady(const DriveSet& drives, const DecayRates& decays,
                      const SigmaState& initial, double eps) {
    if (!(eps > 1e-10 && eps < 1e-1)) {
        throw std::invalid_argument("eps must lie in (1e-10, 1e-1)");
    }

    constexpr double kTMax = 1e4;
    constexpr int kSamplesPerDecade = 32;
    constexpr double kTFirst = 1e-2;

    const StateVector8 target = pack_state(steady_state(drives, decays));
    const GeneratorMatrix gen = build_generator(drives, decays);
    // Integration error must stay well below the threshold being detected.
    const double rel_tol = std::clamp(eps * 1e-3, 2e-14, 1e-8);

    StateVector8 x = pack_state(initial);
    auto deviation = [&](const StateVector8& v) {
        return (v - target).cwiseAbs().maxCoeff();
    };

    if (deviation(x) < eps) {
        return 0.0;
    }

    // Geometric sample times t_k = 1e-2 * 10^{k/32} up to the horizon.
    std::vector<double> ts;
    std::vector<double> devs;
    for (int k = 0;; ++k) {
        const double t = kTFirst * std::pow(10.0, static_cast<double>(k) / kSamplesPerDecade);
        if (t > kTMax) break;
        ts.push_back(t);
    }

    double t_now = 0.0;
    devs.reserve(ts.size());
    std::size_t confirmed = 0;  // samples integrated so far
    auto ensure_samples_until = [&](double t_needed) {
        while (confirmed < ts.size() && ts[confirmed] <= t_needed) {
            integrate_adaptive(gen, x, t_now, ts[confirmed], rel_tol,
                               [](double, const StateVector8&) {});
            t_now = ts[confirmed];
            devs.push_back(deviation(x));
            ++confirmed;
        }
    };

    for (std::size_t k = 0; k < ts.size(); ++k) {
        ensure_samples_until(ts[k]);
        if (devs[k] >= eps) continue;

        // Candidate: require the whole following decade to stay below eps
        // and to end no higher than it started.
        const double t_end = std::min(10.0 * ts[k], kTMax);
        ensure_samples_until(t_end);
        bool ok = true;
        std::size_t last = k;
        for (std::size_t m = k + 1; m < ts.size() && ts[m] <= t_end; ++m) {
            if (devs[m] >= eps) { ok = false; break; }
            last = m;
        }
        if (ok && devs[last] <= devs[k]) {
            return ts[k];
        }
    }

    throw ConvergenceTimeoutError(
        "no settled decade below eps = " + std::to_string(eps) +
            " within t = " + std::to_string(kTMax),
        kTMax);
}

} // namespace deltagain
