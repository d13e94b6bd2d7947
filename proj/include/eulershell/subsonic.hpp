// Stability of the subsonic shell flow under small boundary perturbations:
// pressure data on the inner sphere, Bernoulli function / entropy /
// tangential velocity data on the outer sphere.
//
// The solver iterates the decomposed system. Bernoulli and entropy ride
// along transport equations from the outer data; the pressure satisfies a
// second-order equation (radially hyperbolic-looking factor t-1 < 0, so
// elliptic in the shell) solved mode by mode with a Dirichlet row at r0 and
// a Robin row at r1; the tangential velocity closes the sweep through its
// own transport equation driven by the fresh pressure gradient.
//
// Everything lives in embedded Cartesian components (velocity V = u0 P + w),
// so no operator here ever touches a coordinate chart or a pole.
#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "eulershell/background.hpp"
#include "eulershell/fields.hpp"
#include "eulershell/gas.hpp"
#include "eulershell/residual.hpp"
#include "eulershell/sphere.hpp"

namespace eulershell {

// Boundary data, band-limited on the sphere, stored as spherical-harmonic
// coefficients of the deviation from the background level:
//   p0_hat        pressure deviation on the inner sphere r0 (Dirichlet side)
//   E1_hat        Bernoulli-function deviation on the outer sphere r1
//   s1_hat        entropy deviation on r1
//   u1_pot/u1_str Helmholtz potentials of the tangential velocity on r1,
//                 w1 = s-grad(u1_pot) + J s-grad(u1_str).
struct SubsonicBCs {
  SphCoeffs p0_hat;
  SphCoeffs E1_hat;
  SphCoeffs s1_hat;
  SphCoeffs u1_pot;
  SphCoeffs u1_str;
};

// Measured size of the boundary data (the epsilon of the smallness
// assumption): sum over the four data fields of a C^3-style grid surrogate
// (|value| plus three surface-derivative layers; the velocity is measured
// through its potentials, whose layers start at the first derivative).
// Linear in the data, so halving every coefficient halves the measure.
double perturbation_size(const SubsonicBCs& bcs, const SphereGrid& sph);

// Quasilinear second-order wave operator acting on the pressure of a state;
// annihilated exactly by any spherically symmetric solution of the radial
// system, and the object the linearized operator below approximates.
ScalarField pressure_wave_operator(const StateField& st,
                                   const GasConstants& gas);

// gamma*p times the second-order row of the decomposed system (the advected
// divergence row closed with the lower-order couplings). Identically equal
// to pressure_wave_operator(st) - f1_higher_order(st) for any state whose
// algebraic constraints hold; zero exactly on solutions.
ScalarField pressure_row_defect(const StateField& st, const GasConstants& gas);

// The interior higher-order block transcribed term by term: every summand
// carries at least two tangential factors, so the block vanishes on any
// spherically symmetric state, not just the background.
ScalarField f1_higher_order(const StateField& st, const GasConstants& gas);

// The remaining higher-order block, via its defining identity
//   F2 = c_b^2 L(U - U_b) - N(U),
// where L is the linearized pressure operator and N the quasilinear one.
ScalarField f2_identity(const StateField& st, const RadialProfile& bg);

// The same block transcribed term by term (independent route; the two agree
// to discretization accuracy, which is one of the acceptance checks).
ScalarField f2_transcribed(const StateField& st, const RadialProfile& bg);

// Interior iteration right-hand side F = (F1 + F2)/c_b^2, evaluated as
// L(U - U_b) - pressure_row_defect/(gamma p_b / rho_b). Fixed points of the
// sweep therefore satisfy the exact nonlinear pressure row.
ScalarField higher_order_f(const StateField& st, const RadialProfile& bg);

// Robin right-hand side on the outer sphere, one value per sphere point:
// G1 (tangential-divergence part), G2 (remaining tangential advection
// terms), and G3 (exact remainder of the linearized Robin coefficient).
// Vanishes identically on spherically symmetric states.
std::vector<double> higher_order_g(const StateField& st,
                                   const RadialProfile& bg);

// Solve the linearized pressure equation mode by mode:
//   -LB(v)/r^2 + (t-1) v'' + (4/r) b(t) v' + e(t) v/r^2 = rhs,
//   v = dir_lo on r0,   v' + gamma1 v = robin_hi on r1,
// with t = M_b(r)^2 and gamma1 the outer Robin coefficient of the
// background. dir_lo and robin_hi are per-point values on the sphere grid.
ScalarField linearized_pressure_solve(const ScalarField& rhs,
                                      const std::vector<double>& dir_lo,
                                      const std::vector<double>& robin_hi,
                                      const RadialProfile& bg);

// Largest value of the stability polynomial over the shell; positive means
// the zeroth-order coefficient e(t) turns negative somewhere and the
// iteration refuses to start (unless overridden).
double stability_margin(const GasConstants& gas, const RadialProfile& bg,
                        int samples = 257);

// Grid-max Sobolev surrogate of the distance between two states on the same
// grid: |difference| plus undivided neighbor differences up to `order` for
// the pressure and up to order-1 for the advected scalars and the tangential
// velocity. Undivided differences keep the measure meaningful at roundoff
// scale (divided ones would amplify noise by the mesh factors).
double state_distance(const StateField& a, const StateField& b, int order);

struct SubsonicOptions {
  double tol = 1e-10;   // sweep-to-sweep distance below which we stop
  int max_iter = 100;
  int substeps = 8;     // RK substeps per radial interval in the transports
  bool override_stability = false;
};

struct IterationReport {
  std::vector<double> corrections;  // state_distance(U_k+1, U_k, 2) per sweep
  bool converged = false;
  int iterations = 0;
  double contraction = 0.0;    // max ratio over the last five sweeps
  double epsilon = 0.0;        // measured boundary-data size
  double trust_radius = 0.0;   // K * epsilon with K from the first sweep
  bool trust_exceeded = false;
  EulerResidualNorms residual;             // converged iterate
  EulerResidualNorms background_residual;  // discrete background, same grid
};

// Run the fixed-point sweep on the given grid. The profile must cover the
// grid's radial span and be subsonic throughout. Throws config_error when
// the stability margin is positive and no override is set; throws
// numerical_error if an iterate leaves the physical regime (vacuum or
// stagnation).
std::pair<StateField, IterationReport> iterate_subsonic(
    std::shared_ptr<const ShellGrid> grid, const RadialProfile& bg,
    const SubsonicBCs& bcs, const SubsonicOptions& opts = {});

}  // namespace eulershell
