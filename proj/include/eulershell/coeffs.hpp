// Coefficient functions of the pressure equation linearized about a
// spherically symmetric background, all expressed through t = M^2.
//
// The radial operator acting on one spherical-harmonic mode v(r) reads
//   e1(r) v'' + e2(r) v' + (e3(r) + n(n+1)) v  (+ nonlocal/source couplings)
// with e1 = r^2 (t-1) (elliptic while subsonic), and the outer boundary
// carries a Robin coefficient gamma1.  The quartic stability_poly controls
// the sign of the zeroth-order term: backgrounds with t below its root in
// (0,1) flip the sign and lose the maximum-principle structure, so solvers
// should stay above it (or expect the mode solve to report trouble).
#pragma once

#include "eulershell/background.hpp"
#include "eulershell/gas.hpp"

namespace eulershell {

// f(t) = g(1+2g) t^4 + (-4g^2+2g-3) t^3 + (14-7g) t^2 - 19 t + 6.
// f(0) = 6 and f(1) = -2(g+1)^2, so there is a root in (0,1).
double stability_poly(double gamma, double t);

// Smallest root of stability_poly in (0,1), by bisection.
double stability_root(double gamma);

// b(t) = [(1+2g) t^2 - 3t + 4] / (2(t-1)), the first-derivative coefficient.
double coeff_b(double gamma, double t);

// e(t) = 2 f(t) / (t-1)^3, the zeroth-order coefficient.
double coeff_e(double gamma, double t);

// d1(t) = 4 [(2g-3) t^2 + 8t - 3] / (t-1)^3, Bernoulli-source coefficient.
double coeff_d1(double gamma, double t);

// d2(t) = -[2+(g-1)t] d1(t) / (2(g-1)), entropy-source coefficient.
double coeff_d2(double gamma, double t);

// Robin coefficient of the outer boundary condition,
// gamma1 = (2/r) (g t^2 - t + 2) / (t-1)^2 with t evaluated at r.
double robin_gamma1(const GasConstants& gas, double t, double r);

// All of the above evaluated on a background profile at one radius.
struct LinearizedCoeffs {
  double r = 0.0;
  double t = 0.0;        // squared Mach number of the background
  double e1 = 0.0;       // r^2 (t-1)
  double e2 = 0.0;       // 4 r b(t)
  double e3 = 0.0;       // e(t)
  double d1_term = 0.0;  // rho_b d1(t)
  double d2_term = 0.0;  // rho_b^gamma d2(t)
  double gamma1 = 0.0;
};

LinearizedCoeffs linearized_coeffs(const GasConstants& gas,
                                   const RadialProfile& prof, double r);

}  // namespace eulershell
