// dynamics.hpp — Rotated master equation: right-hand side, affine generator,
// adaptive time evolution, and the linear steady-state solve.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "deltagain/model.hpp"

namespace deltagain {

// Real packing of SigmaState, in this fixed order:
//   [0] s11   [1] s22
//   [2] Re s12  [3] Im s12
//   [4] Re s13  [5] Im s13
//   [6] Re s23  [7] Im s23
using StateVector8 = Eigen::Matrix<double, 8, 1>;

StateVector8 pack_state(const SigmaState& state) noexcept;
SigmaState unpack_state(const StateVector8& v) noexcept;

// Affine form of the equations of motion after trace elimination:
// d(state)/dt = drift * state + constant.
struct GeneratorMatrix {
    Eigen::Matrix<double, 8, 8> drift;
    StateVector8 constant;
};

// Time derivative of the rotated density matrix under the three drives and
// the three decay channels, with s33 = 1 - s11 - s22 substituted. The
// returned SigmaState holds derivative components, not a physical state.
SigmaState eom_rhs(const SigmaState& state, const DriveSet& drives,
                   const DecayRates& decays);

// Assemble the affine generator. Phase enters only through the reduced loop
// phase, so drive sets that differ by 2*pi in Phi give identical matrices.
GeneratorMatrix build_generator(const DriveSet& drives, const DecayRates& decays);

struct TrajectoryPoint {
    double t;
    SigmaState state;
};

struct EvolveResult {
    std::vector<TrajectoryPoint> trajectory;  // includes t = 0 and t = t_final
    SigmaState final_state;
};

// Integrate from `initial` to t_final with a classic 4th-order step and
// step-doubling error control at rel_tol (valid range (1e-14, 1e-3)).
// Throws IntegrationError if the controller underflows the step size.
EvolveResult evolve(const SigmaState& initial, const DriveSet& drives,
                    const DecayRates& decays, double t_final, double rel_tol);

// Unique fixed point of the affine dynamics, from the linear solve
// drift * x = -constant (one iterative-refinement pass keeps the residual
// at the 1e-14 level). Throws DegenerateSteadyStateError when the generator
// is singular or its condition number exceeds 1e12.
SigmaState steady_state(const DriveSet& drives, const DecayRates& decays);

// Max-norm of the packed eom_rhs components.
double steady_state_residual(const SigmaState& state, const DriveSet& drives,
                             const DecayRates& decays);

// Smallest sampled time (geometric grid, 32 samples per decade, horizon
// 1e4) at which the packed max-norm distance to the steady state drops
// below eps and stays there for the following decade, with a non-increasing
// tail. eps must lie in (1e-10, 1e-1). Throws ConvergenceTimeoutError past
// the horizon.
double time_to_steady(const DriveSet& drives, const DecayRates& decays,
                      const SigmaState& initial = SigmaState::ground(),
                      double eps = 1e-3);

} // namespace deltagain
