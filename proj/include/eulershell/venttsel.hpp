// Pressure problem on the normalized shell (r_b, r1) x S^2 behind the shock:
//
//   -LB'(p) + e1 d00 p + e2 d0 p + e3 p + e4 tr(p) = f      in the shell,
//   -LB'(tr p) + mu7 tr(p) + mu9 tr(d0 p)          = h0     on the front sphere,
//   p                                              = h1     on the outer sphere,
//
// with LB' the unit-sphere Laplace-Beltrami operator and tr the restriction
// to the front level r = r_b.  The trace term in the interior equation makes
// the operator nonlocal, and the front row is a Venttsel condition (it
// differentiates the trace tangentially, twice).  Expanded in real spherical
// harmonics the problem falls apart into independent radial two-point BVPs,
//
//   e1 v'' + e2 v' + (e3 + n(n+1)) v + e4 v(r_b) = f_nm,
//   v'(r_b) + a_n v(r_b) = h0_nm / mu9,   v(r1) = h1_nm,
//   a_n = (mu7 + n(n+1)) / mu9,
//
// each handled by the fundamental-pair machinery in mode_bvp.hpp.  This
// header owns what is left: the coefficient bundle on the subsonic branch,
// data analysis/synthesis, the reduction that moves a nonzero outer datum
// into the interior data, and the S-Condition quantities theta_n whose
// non-vanishing is exactly solvability of every mode.
#pragma once

#include <functional>
#include <vector>

#include "eulershell/background.hpp"
#include "eulershell/fields.hpp"
#include "eulershell/frontops.hpp"
#include "eulershell/mode_bvp.hpp"

namespace eulershell {

// Radial coefficients of the interior operator, plus the two front-row
// constants.  The e-functions live on [r_b, r1]; e1 = r^2 (t - 1) is
// negative there (subsonic), e5 weights the Bernoulli source a caller folds
// into f.  Everything is phrased through t = M^2 of the subsonic branch.
struct VenttselCoeffs {
  double rb = 0.0, r1 = 0.0;
  double mu7 = 0.0, mu9 = 0.0;
  std::function<double(double)> e1, e2, e3, e4, e5;
};

VenttselCoeffs venttsel_coeffs(const TransonicBackground& tb,
                               const MuConstants& mu);
// Convenience: computes the front linearization constants internally.
VenttselCoeffs venttsel_coeffs(const TransonicBackground& tb);

// Normalized mode ODE of harmonic degree n (coefficients divided through by
// e1, nonlocal weight -e4/e1, no data).  Callers fill .f per (n, m).
ModeOde venttsel_mode_ode(const VenttselCoeffs& c, int n);

// S-Condition quantity of degree n: terminal value w(r1) of the Cauchy
// problem w(r_b) = 1, w'(r_b) = -a_n for the homogeneous mode equation with
// its nonlocal source.  The mode problems are uniquely solvable iff
// theta_n != 0; theta_n -> 1 as the shell collapses (r_b -> r1).
double venttsel_theta(const VenttselCoeffs& c, int n);

struct SConditionReport {
  int n_requested = 0;        // degree cap asked for
  double threshold = 0.0;     // absolute |theta| cutoff actually applied
  std::vector<double> theta;  // theta[n], n = 0 .. n_checked (may stop early)
  std::vector<int> violations;
  double margin = 0.0;  // min |theta_n| over the checked degrees
  bool holds = false;

  int n_checked() const { return static_cast<int>(theta.size()) - 1; }
};

// Scans theta_n for n = 0..n_max, stopping early once theta exceeds 1 and
// increases for three consecutive degrees (the growth regime is monotone
// from there on, so later zeros are impossible).  rel_threshold is scaled by
// max(1, |theta_0|) to give the absolute cutoff.
SConditionReport check_s_condition(const VenttselCoeffs& c, int n_max = 64,
                                   double rel_threshold = 1e-8);

// Full solve.  f is the complete interior datum (any e5 * Ehat contribution
// already added in); h0 / h1 are point values on the grid's sphere.  The
// grid of f must span [r_b, r1].  A nonzero h1 is removed up front by
// shifting the unknown by its radially constant extension (interior data
// pick up -(n(n+1) + e3 + e4) h1_nm, the front row -(n(n+1) + mu7) h1_nm)
// and added back after the mode solves.  Throws numerical_error naming the
// offending degree if some mode system is singular.
ScalarField venttsel_solve(const ScalarField& f, const std::vector<double>& h0,
                           const std::vector<double>& h1,
                           const VenttselCoeffs& c);

// Independent defect check of a candidate solution: the interior equation
// (quadrature norm over the shell, measure r^2 dr dS) and both boundary rows
// (L2 norms on the unit sphere), each evaluated by spectral differentiation
// of p itself rather than anything the mode solver reported.
struct VenttselResidual {
  double interior = 0.0;
  double front_row = 0.0;
  double dirichlet = 0.0;
};

VenttselResidual venttsel_residual(const ScalarField& p, const ScalarField& f,
                                   const std::vector<double>& h0,
                                   const std::vector<double>& h1,
                                   const VenttselCoeffs& c);

}  // namespace eulershell
