// Spherically symmetric steady flow through a shell r0 < r < r1.
//
// The radial momentum / mass / energy system reduces to one ODE family
//
//   du/dr   =  2 c^2 u / (r (u^2 - c^2))
//   drho/dr = -2 rho u^2 / (r (u^2 - c^2))
//   dp/dr   = -2 rho c^2 u^2 / (r (u^2 - c^2))
//
// along which the Bernoulli constant E and the entropy function A = p rho^-gamma
// are exactly conserved.  Profiles are integrated adaptively onto Chebyshev
// nodes and wrapped in barycentric interpolants so downstream code can sample
// and differentiate them smoothly.

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "eulershell/gas.hpp"

namespace eulershell {

// Smooth radial profile of (u, p, rho) over [lo, hi].
// Values live on Chebyshev-Lobatto nodes; evaluation is barycentric.
class RadialProfile {
 public:
  RadialProfile(GasConstants gas, std::vector<double> nodes,
                std::vector<double> u, std::vector<double> p,
                std::vector<double> rho);

  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  const GasConstants& gas() const { return gas_; }

  RadialState eval(double r) const;
  double u(double r) const;
  double p(double r) const;
  double rho(double r) const;
  double mach(double r) const;

  // d/dr of the stored fields, via the differentiation matrix of the node set.
  double du_dr(double r) const;
  double dp_dr(double r) const;
  double drho_dr(double r) const;

  const std::vector<double>& nodes() const { return nodes_; }

 private:
  GasConstants gas_;
  std::vector<double> nodes_;
  std::vector<double> bw_;  // barycentric weights
  std::vector<double> u_, p_, rho_;
  std::vector<double> du_, dp_, drho_;  // nodal derivatives
};

// Closed-form Mach-number parametrisation of a smooth profile:
//   r(M) = c1 [2 + (gamma-1) M^2]^q / sqrt(M),  q = 1/4 + 1/(2(gamma-1))
//   u(M) = c2 M / sqrt(2 + (gamma-1) M^2)
// with c1, c2 fixed by a reference state.  Each branch (M<1 or M>1) is
// monotone in r, so M(r) inverts by bisection.
struct MachClosedForm {
  double gamma = 1.4;
  double c1 = 0.0;
  double c2 = 0.0;

  static MachClosedForm from_reference(const GasConstants& gas, double r_ref,
                                       double M_ref, double u_ref);

  double r_of_M(double M) const;
  double u_of_M(double M) const;
  // branch: true = subsonic (M<1), false = supersonic (M>1).
  double M_of_r(double r, bool subsonic) const;
};

// Entry data for a subsonic profile posed at the outer sphere r1:
// exit pressure p0 at r0 is the remaining degree of freedom.
struct SubsonicEntry {
  double E1 = 0.0;  // Bernoulli constant
  double s1 = 0.0;  // entropy
  double p0 = 0.0;  // pressure at the inner sphere
};

// Least admissible exit pressure for the given (E1, s1): below this the
// profile cannot stay subsonic all the way to the inner sphere.
double subsonic_pressure_floor(const GasConstants& gas, double E1, double s1);

// Integrate a profile from an anchor state at r_anchor across [lo, hi].
// The anchor may be interior.  Throws numerical_error on sonic crossing.
RadialProfile integrate_profile(const GasConstants& gas, double lo, double hi,
                                double r_anchor, const RadialState& anchor,
                                int n_nodes = 161);

// Subsonic profile on [r0, r1] from exit pressure p0 at r0 together with
// Bernoulli/entropy constants fixed at r1.  Enforces the admissibility
// condition p0 > subsonic_pressure_floor.
RadialProfile solve_subsonic_background(const GasConstants& gas, double r0,
                                        double r1, const SubsonicEntry& entry,
                                        int n_nodes = 161);

// Supersonic profile on [r0, r1] from inflow (u,p,rho) at r0 (Mach > 1 there;
// Mach increases outward, so no sonic risk).
RadialProfile solve_supersonic_background(const GasConstants& gas, double r0,
                                          double r1, const RadialState& inflow,
                                          int n_nodes = 161);

// Rankine-Hugoniot jump across a radial (normal) shock.  Upstream must be
// supersonic; the returned state is the subsonic root of the jump system
// (same mass flux m = rho u, momentum flux p + m u, Bernoulli E), refined by
// Newton iteration.  Throws numerical_error if upstream is not supersonic.
RadialState normal_shock_jump(const GasConstants& gas,
                              const RadialState& upstream);

// Inverse map: given the subsonic side, recover the supersonic state with the
// same fluxes.
RadialState inverse_normal_shock_jump(const GasConstants& gas,
                                      const RadialState& downstream);

// Transonic background: supersonic branch from r0, one standing shock at rb,
// subsonic branch continued to r1.  The subsonic branch is extended inward
// past rb by a collar h_sharp (capped so the extension stays subsonic) to
// give the perturbation analysis room when the front moves.
struct TransonicBackground {
  GasConstants gas;
  double r0 = 0.0, rb = 0.0, r1 = 0.0;
  double h_sharp = 0.0;
  std::shared_ptr<RadialProfile> supersonic;  // on [r0, r1]
  std::shared_ptr<RadialProfile> subsonic;    // on [rb - h_sharp, r1]
  RadialState upstream;    // supersonic state at rb-
  RadialState downstream;  // subsonic state at rb+

  double exit_pressure() const { return subsonic->p(r1); }
};

TransonicBackground solve_transonic_background(const GasConstants& gas,
                                               double r0, double rb, double r1,
                                               const RadialState& inflow,
                                               int n_nodes = 161);

// Shock-first parameterisation: prescribe the subsonic state just behind the
// shock, (p_s, rho_s, M_s) at rb with M_s < 1, and recover the supersonic
// branch by inverting the jump.  This pins the shock location exactly, which
// is the natural way to set up a perturbation study around it.  Downstream
// Mach numbers above 0.999 are refused (vanishing-strength shock).
TransonicBackground solve_transonic_background(const GasConstants& gas,
                                               double r0, double rb, double r1,
                                               double p_s, double rho_s,
                                               double M_s, int n_nodes = 161);

// Exit pressure p(r1) obtained by placing the shock at rb_candidate on the
// given supersonic branch and continuing subsonically to r1.  Monotone
// decreasing in rb_candidate, which find_shock_radius exploits.
double shock_exit_pressure(const GasConstants& gas,
                           const RadialProfile& supersonic,
                           double rb_candidate, double r1);

// Invert shock_exit_pressure for a target exit pressure by bracketed
// bisection over [rb_min, rb_max].
double find_shock_radius(const GasConstants& gas,
                         const RadialProfile& supersonic, double target_p1,
                         double r1, double rb_min, double rb_max);

}  // namespace eulershell
