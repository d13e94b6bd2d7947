// Pointwise operations on a perturbed shock front psi : S^2 -> (r0, r1).
//
// Everything here is formulated in embedded Cartesian components.  A front
// point carries the unit radial P, the front radius psi and the surface
// gradient of psi (an embedded tangent vector of the unit sphere).  The
// conormal of the front graph pairs a 3-velocity u0 P + w with the scalar
//
//   m = rho (u0 - (w . grad psi) / psi),
//
// the mass flux through the front, which the jump conditions conserve.
//
// The jump system itself is solved by splitting the velocity along the unit
// front normal and reusing the one-dimensional normal-shock solve; the
// tangential (to the front, not to the sphere) velocity passes through
// unchanged.  That reproduces the conservation-form jump relations exactly,
// including the tangential momentum balance
//
//   [[p]] grad psi = m psi [[w]],
//
// whose right-hand side, rearranged as omega = m psi [[w]] / [[p]], is the
// exact datum of the front-gradient relation grad psi = omega.
//
// front_functional evaluates the scalar compatibility combination imposed on
// the subsonic side of the front (radial pressure derivative, velocity
// divergence and the transport defects, weighted so the combination vanishes
// identically on exact flows).  Its linearisation around the radial
// background defines the constants collected by mu_constants.

#pragma once

#include <array>

#include "eulershell/background.hpp"

namespace eulershell {

// One-sided flow state at a single front point.  w is the sphere-tangential
// velocity (w . P = 0); u0 the radial component.
struct FrontSideState {
  double u0 = 0.0;
  double p = 0.0;
  double rho = 0.0;
  std::array<double, 3> w{0.0, 0.0, 0.0};

  double speed2() const {
    return u0 * u0 + w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  }
  double E(const GasConstants& gas) const {
    return 0.5 * speed2() + gas.gamma * p / (rho * (gas.gamma - 1.0));
  }
  double A(const GasConstants& gas) const {
    return A_from_state(gas, p, rho);
  }
};

struct RhPoint {
  FrontSideState down;      // subsonic side of the jump
  double mass_flux = 0.0;   // m, conserved across the front
  double normal_mach_up = 0.0;  // upstream Mach along the front normal
  // Exact right side of the front-gradient relation: for a solution,
  // grad psi = omega with omega = m psi [[w]] / [[p]].
  std::array<double, 3> omega{0.0, 0.0, 0.0};
};

// Jump across the front at one point.  P is the unit radial there, grad_psi
// the embedded surface gradient of the front radius.  The upstream state must
// be supersonic along the front normal.
RhPoint exact_rh_solve(const GasConstants& gas, const FrontSideState& up,
                       const std::array<double, 3>& P, double psi,
                       const std::array<double, 3>& grad_psi);

// Subsonic-side trace data entering the front compatibility functional:
// values together with fixed-radius first derivatives at the front point.
// Radial derivatives are physical d/dr; surface gradients and the surface
// divergence are unit-sphere quantities (no 1/r factor applied yet).
struct FrontTrace {
  FrontSideState s;
  double E = 0.0;  // carried separately: the transported Bernoulli field
  double A = 0.0;  // carried separately: the transported entropy field
  double du0_dr = 0.0, dp_dr = 0.0, dE_dr = 0.0, dA_dr = 0.0;
  std::array<double, 3> dw_dr{0.0, 0.0, 0.0};
  std::array<double, 3> grad_p{0.0, 0.0, 0.0};
  std::array<double, 3> grad_u0{0.0, 0.0, 0.0};
  std::array<double, 3> grad_E{0.0, 0.0, 0.0};
  std::array<double, 3> grad_A{0.0, 0.0, 0.0};
  double sdiv_w = 0.0;                        // surface divergence of w
  std::array<double, 3> wgrad_w{0.0, 0.0, 0.0};  // (w . s-grad) w
};

// The combined compatibility functional on the subsonic side of the front.
// Zero on traces of exact flows; normalised so that the radial derivative of
// the pressure offset enters with unit weight.  Requires the radial flow to
// be subsonic in the radial Mach sense ((u0/c)^2 < 1) and the front to be
// non-characteristic (u0 > tangential advection through the slope).
double front_functional(const GasConstants& gas, const FrontTrace& t,
                        const std::array<double, 3>& P, double psi,
                        const std::array<double, 3>& grad_psi);

// Linearisation constants of the front problem around a radial transonic
// background.  mu1..mu4 are radial derivatives, taken at rb, of the offset
// between the post-shock value obtained by moving the shock and the fixed
// subsonic branch, for u0, p, rho and the entropy function respectively.
// gamma2, gamma3 are the pressure-trace and divergence-row weights of the
// linearised front functional; mu5..mu9 are the derived combinations used by
// the nonlocal boundary row and the front update.  Construction validates
// the expected signs and throws numerical_error("linearization
// inconsistency...") when they fail.
struct MuConstants {
  double mu0 = 0.0;
  double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0, mu4 = 0.0;
  double mu5 = 0.0, mu6 = 0.0, mu7 = 0.0, mu8 = 0.0, mu9 = 0.0;
  double gamma2 = 0.0, gamma3 = 0.0;
};

MuConstants mu_constants(const TransonicBackground& tb);

}  // namespace eulershell
