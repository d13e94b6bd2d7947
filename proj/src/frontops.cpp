#include "eulershell/frontops.hpp"

#include <cmath>
#include <functional>

#include "eulershell/coeffs.hpp"
#include "eulershell/errors.hpp"

namespace eulershell {

namespace {

using V3 = std::array<double, 3>;

double dot(const V3& a, const V3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

V3 axpy(double a, const V3& x, const V3& y) {
  return {a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2]};
}

V3 scaled(double a, const V3& x) { return {a * x[0], a * x[1], a * x[2]}; }

}  // namespace

RhPoint exact_rh_solve(const GasConstants& gas, const FrontSideState& up,
                       const V3& P, double psi, const V3& grad_psi) {
  if (!(psi > 0.0)) throw config_error("front radius must be positive");
  const V3 slope = scaled(1.0 / psi, grad_psi);
  const double stretch = std::sqrt(1.0 + dot(slope, slope));
  // Unit normal of the graph x0 = psi(x'), pointing outward (downstream).
  const V3 N = scaled(1.0 / stretch, axpy(-1.0, slope, P));

  const V3 u_up = axpy(up.u0, P, up.w);
  const double un_up = dot(u_up, N);
  const double c_up = std::sqrt(gas.gamma * up.p / up.rho);
  if (!(un_up > c_up))
    throw numerical_error(
        "front jump requires the upstream flow to be supersonic along the "
        "front normal");

  const RadialState oned = normal_shock_jump(gas, {un_up, up.p, up.rho});
  const V3 u_tan = axpy(-un_up, N, u_up);  // continuous across the front
  const V3 u_dn = axpy(oned.u, N, u_tan);

  RhPoint out;
  out.down.u0 = dot(u_dn, P);
  out.down.w = axpy(-out.down.u0, P, u_dn);
  out.down.p = oned.p;
  out.down.rho = oned.rho;
  out.mass_flux = up.rho * (up.u0 - dot(up.w, grad_psi) / psi);
  out.normal_mach_up = un_up / c_up;
  const double pjump = oned.p - up.p;
  const V3 wjump = axpy(-1.0, up.w, out.down.w);
  out.omega = scaled(out.mass_flux * psi / pjump, wjump);
  return out;
}

double front_functional(const GasConstants& gas, const FrontTrace& t,
                        const V3& P, double psi, const V3& grad_psi) {
  const double g = gas.gamma;
  const double u0 = t.s.u0;
  const double p = t.s.p;
  const double rho = t.s.rho;
  const V3& w = t.s.w;
  const double c2 = g * p / rho;
  const double tu = u0 * u0 / c2;
  if (!(tu < 1.0))
    throw numerical_error(
        "front compatibility functional needs a radially subsonic trace");
  const double adv = dot(w, grad_psi) / psi;  // tangential advection u'(psi)
  const double denom = u0 - adv;
  if (!(denom > 0.0))
    throw numerical_error("front is characteristic for the trace velocity");

  const double r = psi;
  const double D_up = u0 * t.dp_dr + dot(w, t.grad_p) / r;
  const double div_u = t.du0_dr + 2.0 * u0 / r + t.sdiv_w / r;
  const double D_uE = u0 * t.dE_dr + dot(w, t.grad_E) / r;
  const double D_uA = u0 * t.dA_dr + dot(w, t.grad_A) / r;

  // Momentum defect Phi = (V . grad) V + grad p / rho in embedded components.
  V3 phi = scaled(u0, axpy(t.du0_dr, P, t.dw_dr));
  phi = axpy(1.0 / r, axpy(dot(w, t.grad_u0), P, axpy(u0, w, t.wgrad_w)), phi);
  phi = axpy(1.0 / rho, axpy(t.dp_dr, P, scaled(1.0 / r, t.grad_p)), phi);

  const double ratio = adv / denom;
  const double l1 = -(1.0 / (u0 * u0)) * ratio * D_uE;
  const double l2 =
      std::pow(rho, g - 1.0) / ((g - 1.0) * u0 * u0) * ratio * D_uA;
  const double l3 = -dot(phi, P) / u0 + dot(phi, grad_psi) / (psi * denom) +
                    ratio / (u0 * u0) * dot(phi, w);

  const double pref = rho * u0 / (tu - 1.0);
  return pref * (D_up / (g * p) + div_u + l1 + l2 + l3);
}

namespace {

// Trace of the radial family p_eps(r) = p_b(r) + eps * phi(r) with the
// Bernoulli constant and entropy held at their background values and no
// tangential velocity.  Such families balance radial momentum exactly, so
// only the pressure-divergence part of the functional responds.  ramp=false
// probes the trace value (phi = 1), ramp=true the radial derivative
// (phi = r - rb).
FrontTrace slaved_trace(const GasConstants& gas, const TransonicBackground& tb,
                        double eps, bool ramp) {
  const double g = gas.gamma;
  const double rb = tb.rb;
  const double pb = tb.downstream.p;
  const double dpb = tb.subsonic->dp_dr(rb);
  const double Ab = tb.downstream.A(gas);
  const double Eb = tb.downstream.E(gas);

  const double pval = pb + (ramp ? 0.0 : eps);
  const double dpdr = dpb + (ramp ? eps : 0.0);
  const double rho = std::pow(pval / Ab, 1.0 / g);
  const double c2 = g * pval / rho;
  const double u0 = std::sqrt(2.0 * Eb - 2.0 * c2 / (g - 1.0));

  FrontTrace t;
  t.s.u0 = u0;
  t.s.p = pval;
  t.s.rho = rho;
  t.E = Eb;
  t.A = Ab;
  t.dp_dr = dpdr;
  t.du0_dr = -c2 * dpdr / (g * pval * u0);
  return t;
}

// Trace of the background flow with a weak tangential velocity added:
// w = eps * dY(theta) e_theta for the zonal quadrupole harmonic Y, rigidly
// extended in radius.  Evaluated at colatitude theta0, longitude 0.
FrontTrace tangent_trace(const GasConstants& gas,
                         const TransonicBackground& tb, double eps,
                         double theta0, double* sdiv_dir) {
  const double rb = tb.rb;
  const double a20 = std::sqrt(5.0 / (16.0 * M_PI));
  const double ct = std::cos(theta0), st = std::sin(theta0);
  const double Y = a20 * (3.0 * ct * ct - 1.0);
  const double dY = -6.0 * a20 * ct * st;
  if (sdiv_dir) *sdiv_dir = -6.0 * Y;  // Laplace-Beltrami of Y at the point

  const V3 e_theta{ct, 0.0, -st};
  const V3 P{st, 0.0, ct};

  FrontTrace t;
  t.s.u0 = tb.downstream.u;
  t.s.p = tb.downstream.p;
  t.s.rho = tb.downstream.rho;
  t.s.w = scaled(eps * dY, e_theta);
  t.E = tb.downstream.E(gas) + 0.5 * eps * eps * dY * dY;
  t.A = tb.downstream.A(gas);
  t.du0_dr = tb.subsonic->du_dr(rb);
  t.dp_dr = tb.subsonic->dp_dr(rb);
  t.sdiv_w = eps * (-6.0 * Y);
  // (w . s-grad) w for w = h e_theta: h h' e_theta - h^2 P.
  const double h = eps * dY;
  const double ddY = -6.0 * a20 * (ct * ct - st * st);
  t.wgrad_w = axpy(h * eps * ddY, e_theta, scaled(-h * h, P));
  return t;
}

// Centred difference with one Richardson pass.
double richardson(const std::function<double(double)>& f, double h) {
  const double d1 = (f(h) - f(-h)) / (2.0 * h);
  const double d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

MuConstants mu_constants(const TransonicBackground& tb) {
  const GasConstants& gas = tb.gas;
  const double rb = tb.rb;
  MuConstants mc;

  const double m_b = tb.downstream.rho * tb.downstream.u;
  const double pjump = tb.downstream.p - tb.upstream.p;
  mc.mu0 = m_b / pjump;

  // Offsets between the moved-shock downstream value and the fixed subsonic
  // branch, differentiated at rb.
  auto offset = [&](double r, int k) {
    const RadialState moved =
        normal_shock_jump(gas, tb.supersonic->eval(r));
    const RadialState fixed = tb.subsonic->eval(r);
    switch (k) {
      case 0: return moved.u - fixed.u;
      case 1: return moved.p - fixed.p;
      case 2: return moved.rho - fixed.rho;
      default: return moved.A(gas) - fixed.A(gas);
    }
  };
  const double h = 1e-5 * rb;
  auto jump_deriv = [&](int k) {
    return richardson([&](double d) { return offset(rb + d, k); }, h);
  };
  mc.mu1 = jump_deriv(0);
  mc.mu2 = jump_deriv(1);
  mc.mu3 = jump_deriv(2);
  mc.mu4 = jump_deriv(3);

  // Probe the compatibility functional along closed-form families.  The
  // radial-derivative probe checks the normalisation (unit weight); the
  // value probe yields gamma2; the tangential probe yields gamma3.
  const V3 zhat{0.0, 0.0, 1.0};
  const V3 zero{0.0, 0.0, 0.0};
  const double eps_p = 1e-5 * tb.downstream.p;
  const double unit_w = richardson(
      [&](double e) {
        return front_functional(gas, slaved_trace(gas, tb, e, true), zhat, rb,
                                zero);
      },
      eps_p);
  if (std::abs(unit_w - 1.0) > 1e-7)
    throw numerical_error(
        "linearization inconsistency: the front functional is not normalised "
        "to unit weight on the radial pressure derivative");

  mc.gamma2 = richardson(
      [&](double e) {
        return front_functional(gas, slaved_trace(gas, tb, e, false), zhat, rb,
                                zero);
      },
      eps_p);
  const double t_plus = tb.downstream.mach(gas) * tb.downstream.mach(gas);
  const double gamma2_closed = robin_gamma1(gas, t_plus, rb);
  if (std::abs(mc.gamma2 - gamma2_closed) > 1e-6 * std::abs(gamma2_closed))
    throw numerical_error(
        "linearization inconsistency: pressure-trace weight disagrees with "
        "its closed form");

  const double theta0 = 1.0;
  double sdiv_dir = 0.0;
  const double eps_w = 1e-5 * tb.downstream.u;
  const double dW = richardson(
      [&](double e) {
        double tmp;
        const FrontTrace t = tangent_trace(gas, tb, e, theta0, &tmp);
        const double st = std::sin(theta0), ct = std::cos(theta0);
        return front_functional(gas, t, {st, 0.0, ct}, rb, zero);
      },
      eps_w);
  tangent_trace(gas, tb, 0.0, theta0, &sdiv_dir);
  // d* of the pulled-back velocity form responds with -rb * sdiv_dir.
  mc.gamma3 = -dW / (-rb * sdiv_dir);

  mc.mu5 = 1.0 / mc.gamma3;
  mc.mu6 = mc.gamma2 * mc.mu2 / mc.gamma3;
  mc.mu7 = -mc.mu0 * mc.mu6;
  mc.mu9 = -mc.mu0 * mc.mu2 * mc.mu5;
  mc.mu8 = -mc.mu2 * mc.mu5 / (4.0 * M_PI * mc.mu6);

  const bool ok = mc.mu0 > 0.0 && mc.gamma2 > 0.0 && mc.gamma3 < 0.0 &&
                  mc.mu2 < 0.0 && mc.mu5 < 0.0 && mc.mu6 > 0.0 &&
                  mc.mu7 < 0.0 && mc.mu8 < 0.0 && mc.mu9 < 0.0;
  if (!ok)
    throw numerical_error(
        "linearization inconsistency: front constants have unexpected signs");
  return mc;
}

}  // namespace eulershell
