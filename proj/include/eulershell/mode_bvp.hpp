// Two-point boundary value machinery for one spherical-harmonic mode of the
// radial pressure operator, written in the normalized form
//
//   v'' + p(r) v' + q(r) v = f(r) + rnl(r) * v(lo)                on [lo, hi].
//
// The rnl term couples the interior equation to the unknown's trace at the
// inner end, which is what makes the shock-front pressure problem nonlocal.
// Solutions are assembled from the fundamental pair of Cauchy solutions at lo
// (phi1 with data (1,0), phi2 with data (0,1)) plus cumulative
// variation-of-parameters integrals, all carried by one adaptive integration
// sweep.  The Wronskian in those integrals is evaluated in Abel form
// exp(-int p), which stays exact even when the pair grows by many orders of
// magnitude at large harmonic degree.
#pragma once

#include <functional>
#include <vector>

namespace eulershell {

struct ModeOde {
  double lo = 0.0;
  double hi = 0.0;
  std::function<double(double)> p;    // first-derivative coefficient
  std::function<double(double)> q;    // zeroth-order coefficient
  std::function<double(double)> f;    // data; null means 0
  std::function<double(double)> rnl;  // nonlocal trace weight; null means 0
};

// Fundamental pair sampled on an ascending node set.
struct CauchyPair {
  std::vector<double> r;
  std::vector<double> phi1, dphi1;  // Cauchy data (1, 0) at lo
  std::vector<double> phi2, dphi2;  // Cauchy data (0, 1) at lo
  std::vector<double> wronskian;    // phi1 dphi2 - dphi1 phi2, as integrated
  std::vector<double> abel;         // exp(-int_lo^r p), the same quantity
};

// Integrates the pair across [lo, hi], landing exactly on out_nodes (which
// must be ascending and inside [lo, hi]; lo/hi are added if absent).
CauchyPair cauchy_pair(const ModeOde& ode,
                       const std::vector<double>& out_nodes);

struct ModeSolution {
  std::vector<double> r;   // the node set actually used
  std::vector<double> v;
  std::vector<double> dv;
  double v_lo = 0.0, dv_lo = 0.0;
  double v_hi = 0.0, dv_hi = 0.0;
  double det = 0.0;  // 2x2 boundary-system determinant (= -theta for the
                     // trace-row problem; Robin denominator otherwise)
};

// Trace row at lo:  v'(lo) + a v(lo) = h,   Dirichlet at hi:  v(hi) = dir_hi.
// This is the per-mode reduction of the Venttsel condition, with
// a = (mu7 + n(n+1))/mu9 and h the row datum divided by mu9.  Throws
// numerical_error naming the offending mode when the 2x2 system is singular
// (the S-Condition quantity theta_n vanishing).
ModeSolution mode_bvp_solve(const ModeOde& ode, int n, double a, double h,
                            double dir_hi,
                            const std::vector<double>& out_nodes);

// Dirichlet at lo:  v(lo) = dir_lo,   Robin at hi:  v'(hi) + g1 v(hi) = h.
// The subsonic pressure modes use this with g1 the outer Robin coefficient.
// No nonlocal term is admitted here (ode.rnl must be null or zero).
ModeSolution robin_dirichlet_mode_solve(const ModeOde& ode, int n,
                                        double dir_lo, double g1, double h,
                                        const std::vector<double>& out_nodes);

// S-Condition quantity for one mode: w(hi) for the Cauchy problem
// w(lo) = 1, w'(lo) = -a, including the nonlocal source rnl * w(lo).
// mode_bvp_solve's determinant equals -mode_theta(ode, a).
double mode_theta(const ModeOde& ode, double a);

}  // namespace eulershell
