#include "eulershell/background.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "eulershell/cheb.hpp"
#include "eulershell/errors.hpp"
#include "eulershell/ode45.hpp"

namespace eulershell {

namespace {

// Right-hand side of the radial system; throws when the state approaches the
// sonic line, where the reduced ODE degenerates.
void radial_rhs(const GasConstants& gas, double r,
                const std::array<double, 3>& y, std::array<double, 3>& dy) {
  const double u = y[0], p = y[1], rho = y[2];
  if (p <= 0.0 || rho <= 0.0)
    throw numerical_error("background profile left the physical region");
  const double c2 = gas.gamma * p / rho;
  const double denom = u * u - c2;
  if (std::abs(denom) < 1e-10 * c2)
    throw numerical_error("sonic crossing in background integration");
  const double common = 2.0 * u / (r * denom);
  dy[0] = c2 * common;
  dy[1] = -rho * c2 * u * common;
  dy[2] = -rho * u * common;
}

}  // namespace

RadialProfile::RadialProfile(GasConstants gas, std::vector<double> nodes,
                             std::vector<double> u, std::vector<double> p,
                             std::vector<double> rho)
    : gas_(gas),
      nodes_(std::move(nodes)),
      u_(std::move(u)),
      p_(std::move(p)),
      rho_(std::move(rho)) {
  if (nodes_.size() < 2 || u_.size() != nodes_.size() ||
      p_.size() != nodes_.size() || rho_.size() != nodes_.size())
    throw config_error("radial profile needs matching node/value arrays");
  bw_ = bary_weights(nodes_);
  const auto D = diff_matrix(nodes_, bw_);
  du_.resize(nodes_.size());
  dp_.resize(nodes_.size());
  drho_.resize(nodes_.size());
  apply_matrix(D, u_, du_);
  apply_matrix(D, p_, dp_);
  apply_matrix(D, rho_, drho_);
}

RadialState RadialProfile::eval(double r) const {
  return RadialState{bary_eval(nodes_, bw_, u_, r), bary_eval(nodes_, bw_, p_, r),
                     bary_eval(nodes_, bw_, rho_, r)};
}

double RadialProfile::u(double r) const { return bary_eval(nodes_, bw_, u_, r); }
double RadialProfile::p(double r) const { return bary_eval(nodes_, bw_, p_, r); }
double RadialProfile::rho(double r) const {
  return bary_eval(nodes_, bw_, rho_, r);
}

double RadialProfile::mach(double r) const {
  const RadialState st = eval(r);
  return st.u / sound_speed(gas_, st.p, st.rho);
}

double RadialProfile::du_dr(double r) const {
  return bary_eval(nodes_, bw_, du_, r);
}
double RadialProfile::dp_dr(double r) const {
  return bary_eval(nodes_, bw_, dp_, r);
}
double RadialProfile::drho_dr(double r) const {
  return bary_eval(nodes_, bw_, drho_, r);
}

MachClosedForm MachClosedForm::from_reference(const GasConstants& gas,
                                              double r_ref, double M_ref,
                                              double u_ref) {
  MachClosedForm cf;
  cf.gamma = gas.gamma;
  const double q = 0.25 + 0.5 / (gas.gamma - 1.0);
  const double base = 2.0 + (gas.gamma - 1.0) * M_ref * M_ref;
  cf.c1 = r_ref * std::sqrt(M_ref) / std::pow(base, q);
  cf.c2 = u_ref * std::sqrt(base) / M_ref;
  return cf;
}

double MachClosedForm::r_of_M(double M) const {
  const double q = 0.25 + 0.5 / (gamma - 1.0);
  return c1 * std::pow(2.0 + (gamma - 1.0) * M * M, q) / std::sqrt(M);
}

double MachClosedForm::u_of_M(double M) const {
  return c2 * M / std::sqrt(2.0 + (gamma - 1.0) * M * M);
}

double MachClosedForm::M_of_r(double r, bool subsonic) const {
  // r_of_M is decreasing on (0,1) and increasing on (1,inf); bisect.
  double a, b;
  if (subsonic) {
    a = 1e-12;
    b = 1.0 - 1e-14;
    if (r < r_of_M(b)) throw numerical_error("radius below sonic radius");
  } else {
    a = 1.0 + 1e-14;
    b = 1e6;
    if (r < r_of_M(a)) throw numerical_error("radius below sonic radius");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const bool left = subsonic ? (r_of_M(mid) > r) : (r_of_M(mid) < r);
    (left ? a : b) = mid;
    if (b - a < 1e-15 * (1.0 + b)) break;
  }
  return 0.5 * (a + b);
}

double subsonic_pressure_floor(const GasConstants& gas, double E1, double s1) {
  // Sonic state for given Bernoulli constant: c*^2 = 2(gamma-1)E/(gamma+1).
  const double g = gas.gamma;
  const double A = entropy_function(gas, s1);
  const double cstar2 = 2.0 * (g - 1.0) * E1 / (g + 1.0);
  // c^2 = gamma p / rho and p = A rho^gamma give rho = (c^2/(gamma A))^{1/(g-1)}.
  const double rho_star = std::pow(cstar2 / (g * A), 1.0 / (g - 1.0));
  return A * std::pow(rho_star, g);
}

RadialProfile integrate_profile(const GasConstants& gas, double lo, double hi,
                                double r_anchor, const RadialState& anchor,
                                int n_nodes) {
  if (!(lo < hi) || r_anchor < lo - 1e-12 || r_anchor > hi + 1e-12)
    throw config_error("profile anchor must lie inside [lo, hi]");
  const std::vector<double> nodes = cheb_nodes(n_nodes, lo, hi);
  std::vector<double> u(n_nodes), p(n_nodes), rho(n_nodes);

  Ode45Options opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-12;
  Ode45<3> ode([&gas](double r, const std::array<double, 3>& y,
                      std::array<double, 3>& dy) { radial_rhs(gas, r, y, dy); },
               opts);

  const std::array<double, 3> y0{anchor.u, anchor.p, anchor.rho};
  // Split node list at the anchor; march outward in both directions.
  std::vector<double> up, down;
  for (double r : nodes) (r >= r_anchor ? up : down).push_back(r);
  std::sort(down.rbegin(), down.rend());

  auto store = [&](double r, const std::array<double, 3>& y) {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), r - 1e-13);
    const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
    u[i] = y[0];
    p[i] = y[1];
    rho[i] = y[2];
  };
  if (!up.empty()) ode.integrate_nodes(r_anchor, y0, up, store);
  if (!down.empty()) ode.integrate_nodes(r_anchor, y0, down, store);
  return RadialProfile(gas, nodes, std::move(u), std::move(p), std::move(rho));
}

RadialProfile solve_subsonic_background(const GasConstants& gas, double r0,
                                        double r1, const SubsonicEntry& entry,
                                        int n_nodes) {
  const double g = gas.gamma;
  const double floor = subsonic_pressure_floor(gas, entry.E1, entry.s1);
  if (!(entry.p0 > floor))
    throw numerical_error(
        "exit pressure too low for a subsonic profile (needs p0 > " +
        std::to_string(floor) + ")");
  const double A = entropy_function(gas, entry.s1);
  const double rho0 = rho_from_pA(gas, entry.p0, A);
  const double c0sq = g * entry.p0 / rho0;
  const double usq = 2.0 * (entry.E1 - c0sq / (g - 1.0));
  if (!(usq > 0.0))
    throw numerical_error("exit pressure exceeds the stagnation pressure");
  const RadialState anchor{std::sqrt(usq), entry.p0, rho0};
  return integrate_profile(gas, r0, r1, r0, anchor, n_nodes);
}

RadialProfile solve_supersonic_background(const GasConstants& gas, double r0,
                                          double r1, const RadialState& inflow,
                                          int n_nodes) {
  if (inflow.u <= sound_speed(gas, inflow.p, inflow.rho))
    throw numerical_error("supersonic branch requires Mach > 1 at inflow");
  return integrate_profile(gas, r0, r1, r0, inflow, n_nodes);
}

namespace {

// The two velocity roots sharing mass flux m, momentum flux Pm and Bernoulli
// constant En satisfy the quadratic
//   (gamma+1)/(2(gamma-1)) x^2 - gamma Pm x / ((gamma-1) m) + En = 0,
// whose product of roots is c*^2 = 2(gamma-1) En / (gamma+1).
RadialState shock_partner(const GasConstants& gas, const RadialState& in) {
  const double g = gas.gamma;
  const double m = in.rho * in.u;
  const double Pm = in.p + m * in.u;
  const double En = in.E(gas);
  const double cstar2 = 2.0 * (g - 1.0) * En / (g + 1.0);
  double x = cstar2 / in.u;  // Vieta: other root of the quadratic
  // Newton polish on f(x) = x^2/2 + gamma x (Pm - m x)/((gamma-1) m) - En.
  for (int it = 0; it < 3; ++it) {
    const double f = 0.5 * x * x + g * x * (Pm - m * x) / ((g - 1.0) * m) - En;
    const double df = x + g * (Pm - 2.0 * m * x) / ((g - 1.0) * m);
    if (df == 0.0) break;
    x -= f / df;
  }
  const double p = Pm - m * x;
  const double rho = m / x;
  if (!(p > 0.0) || !(rho > 0.0))
    throw numerical_error("shock jump produced a non-physical state");
  return RadialState{x, p, rho};
}

}  // namespace

RadialState normal_shock_jump(const GasConstants& gas,
                              const RadialState& upstream) {
  if (upstream.mach(gas) <= 1.0)
    throw numerical_error("shock jump requires a supersonic upstream state");
  const RadialState down = shock_partner(gas, upstream);
  if (down.mach(gas) >= 1.0 || down.p <= upstream.p)
    throw numerical_error("shock jump failed to reach the compressive branch");
  return down;
}

RadialState inverse_normal_shock_jump(const GasConstants& gas,
                                      const RadialState& downstream) {
  if (downstream.mach(gas) >= 1.0)
    throw numerical_error("inverse shock jump requires a subsonic state");
  const RadialState up = shock_partner(gas, downstream);
  if (up.mach(gas) <= 1.0)
    throw numerical_error("inverse shock jump failed to reach Mach > 1");
  return up;
}

namespace {

// Shared tail of the transonic constructors: collar width and the extended
// subsonic branch, once the supersonic branch and the two shock states are
// known.
void finish_transonic(TransonicBackground& tb, int n_nodes) {
  const GasConstants& gas = tb.gas;
  // Inward extension collar: a quarter of the narrower side, further capped
  // so the extended subsonic branch stays clearly below Mach 1.  The closed
  // form gives the radius where the branch would reach M = 0.99 exactly.
  const double Mplus = tb.downstream.mach(gas);
  const MachClosedForm cf =
      MachClosedForm::from_reference(gas, tb.rb, Mplus, tb.downstream.u);
  const double r99 = cf.r_of_M(0.99);
  const double h_limit = tb.rb - r99;
  const double h0 = 0.25 * std::min(tb.rb - tb.r0, tb.r1 - tb.rb);
  tb.h_sharp = std::min(h0, 0.9 * h_limit);
  if (!(tb.h_sharp > 0.0))
    throw numerical_error("shock too weak to extend the subsonic branch");

  tb.subsonic = std::make_shared<RadialProfile>(integrate_profile(
      gas, tb.rb - tb.h_sharp, tb.r1, tb.rb, tb.downstream, n_nodes));
}

}  // namespace

TransonicBackground solve_transonic_background(const GasConstants& gas,
                                               double r0, double rb, double r1,
                                               const RadialState& inflow,
                                               int n_nodes) {
  if (!(r0 < rb && rb < r1))
    throw config_error("transonic background needs r0 < rb < r1");
  TransonicBackground tb;
  tb.gas = gas;
  tb.r0 = r0;
  tb.rb = rb;
  tb.r1 = r1;
  tb.supersonic = std::make_shared<RadialProfile>(
      solve_supersonic_background(gas, r0, r1, inflow, n_nodes));
  tb.upstream = tb.supersonic->eval(rb);
  tb.downstream = normal_shock_jump(gas, tb.upstream);
  finish_transonic(tb, n_nodes);
  return tb;
}

TransonicBackground solve_transonic_background(const GasConstants& gas,
                                               double r0, double rb, double r1,
                                               double p_s, double rho_s,
                                               double M_s, int n_nodes) {
  if (!(r0 < rb && rb < r1))
    throw config_error("transonic background needs r0 < rb < r1");
  if (!(p_s > 0.0) || !(rho_s > 0.0))
    throw config_error("transonic background needs p_s > 0 and rho_s > 0");
  if (!(M_s > 0.0) || M_s > 0.999)
    throw config_error(
        "downstream Mach number must lie in (0, 0.999]: the shock degenerates "
        "as M_s -> 1");

  TransonicBackground tb;
  tb.gas = gas;
  tb.r0 = r0;
  tb.rb = rb;
  tb.r1 = r1;
  tb.downstream =
      RadialState{M_s * std::sqrt(gas.gamma * p_s / rho_s), p_s, rho_s};
  tb.upstream = inverse_normal_shock_jump(gas, tb.downstream);

  // The supersonic branch decelerates inward; it only spans [r0, rb] if the
  // sonic radius of its closed form lies strictly inside the inner sphere.
  const MachClosedForm up_cf = MachClosedForm::from_reference(
      gas, rb, tb.upstream.mach(gas), tb.upstream.u);
  if (up_cf.r_of_M(1.0) >= r0)
    throw config_error(
        "invalid parameters: the supersonic branch reaches Mach 1 at r = " +
        std::to_string(up_cf.r_of_M(1.0)) + " inside the shell");
  tb.supersonic = std::make_shared<RadialProfile>(
      integrate_profile(gas, r0, r1, rb, tb.upstream, n_nodes));
  finish_transonic(tb, n_nodes);
  return tb;
}

double shock_exit_pressure(const GasConstants& gas,
                           const RadialProfile& supersonic,
                           double rb_candidate, double r1) {
  const RadialState up = supersonic.eval(rb_candidate);
  const RadialState down = normal_shock_jump(gas, up);
  Ode45Options opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-12;
  Ode45<3> ode([&gas](double r, const std::array<double, 3>& y,
                      std::array<double, 3>& dy) { radial_rhs(gas, r, y, dy); },
               opts);
  const auto yend =
      ode.integrate(rb_candidate, {down.u, down.p, down.rho}, r1);
  return yend[1];
}

double find_shock_radius(const GasConstants& gas,
                         const RadialProfile& supersonic, double target_p1,
                         double r1, double rb_min, double rb_max) {
  auto f = [&](double rb) {
    return shock_exit_pressure(gas, supersonic, rb, r1) - target_p1;
  };
  double fa = f(rb_min), fb = f(rb_max);
  if (fa * fb > 0.0)
    throw numerical_error("target exit pressure not bracketed by shock radii");
  double a = rb_min, b = rb_max;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (fa * fm < 0.0) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
    if (b - a < 1e-14 * (1.0 + std::abs(b))) break;
  }
  return 0.5 * (a + b);
}

}  // namespace eulershell
