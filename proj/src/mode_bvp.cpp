#include "eulershell/mode_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eulershell/errors.hpp"
#include "eulershell/ode45.hpp"

namespace eulershell {

namespace {

// Augmented state carried across [lo, hi]:
//   0..3  phi1, phi1', phi2, phi2'
//   4     P = int_lo^r p            (Wronskian = exp(-P) by Abel's identity)
//   5..6  I1f, I2f = int phi{1,2} f / W
//   7..8  I1r, I2r = int phi{1,2} rnl / W
constexpr std::size_t kDim = 9;

struct Sweep {
  std::vector<double> r;
  std::vector<std::array<double, kDim>> y;
};

double eval_or_zero(const std::function<double(double)>& g, double r) {
  return g ? g(r) : 0.0;
}

std::vector<double> with_endpoints(const ModeOde& ode,
                                   const std::vector<double>& out_nodes) {
  std::vector<double> nodes;
  nodes.reserve(out_nodes.size() + 2);
  nodes.push_back(ode.lo);
  for (double r : out_nodes) {
    if (!(r >= ode.lo && r <= ode.hi))
      throw config_error("mode_bvp: output node outside [lo, hi]");
    if (r > nodes.back()) nodes.push_back(r);
    else if (r < nodes.back())
      throw config_error("mode_bvp: output nodes must ascend");
  }
  if (nodes.back() < ode.hi) nodes.push_back(ode.hi);
  return nodes;
}

Sweep integrate_mode(const ModeOde& ode, const std::vector<double>& nodes) {
  if (!(ode.hi > ode.lo)) throw config_error("mode_bvp: need hi > lo");
  if (!ode.p || !ode.q) throw config_error("mode_bvp: p and q required");

  Ode45<kDim>::Rhs rhs = [&ode](double r, const std::array<double, kDim>& y,
                                std::array<double, kDim>& dy) {
    const double p = ode.p(r);
    const double q = ode.q(r);
    const double winv = std::exp(y[4]);  // 1/W = exp(+P)
    const double gf = eval_or_zero(ode.f, r);
    const double gr = eval_or_zero(ode.rnl, r);
    dy[0] = y[1];
    dy[1] = -(p * y[1] + q * y[0]);
    dy[2] = y[3];
    dy[3] = -(p * y[3] + q * y[2]);
    dy[4] = p;
    dy[5] = y[0] * gf * winv;
    dy[6] = y[2] * gf * winv;
    dy[7] = y[0] * gr * winv;
    dy[8] = y[2] * gr * winv;
  };

  Ode45Options opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  Ode45<kDim> solver(std::move(rhs), opt);

  Sweep sweep;
  sweep.r = nodes;
  sweep.y.reserve(nodes.size());
  std::array<double, kDim> y0{};
  y0[0] = 1.0;  // phi1
  y0[3] = 1.0;  // phi2'
  try {
    solver.integrate_nodes(ode.lo, y0, nodes,
                           [&sweep](double, const std::array<double, kDim>& y) {
                             sweep.y.push_back(y);
                           });
  } catch (const std::runtime_error& e) {
    throw numerical_error(std::string("mode_bvp: integration failed: ") +
                          e.what());
  }
  return sweep;
}

// v = c1 (phi1 + phi2 I1r - phi1 I2r) + c2 phi2 + (phi2 I1f - phi1 I2f)
struct Assembled {
  double trace_resp, dtrace_resp;  // response to unit trace v(lo)
  double part, dpart;              // particular response to f
};

Assembled assemble_at(const std::array<double, kDim>& y) {
  Assembled a;
  a.part = y[2] * y[5] - y[0] * y[6];
  a.dpart = y[3] * y[5] - y[1] * y[6];
  a.trace_resp = y[0] + y[2] * y[7] - y[0] * y[8];
  a.dtrace_resp = y[1] + y[3] * y[7] - y[1] * y[8];
  return a;
}

ModeSolution sample(const Sweep& sweep, const std::vector<double>& out_nodes,
                    double c1, double c2) {
  ModeSolution sol;
  sol.r = out_nodes;
  sol.v.reserve(out_nodes.size());
  sol.dv.reserve(out_nodes.size());
  std::size_t k = 0;
  for (double r : out_nodes) {
    while (sweep.r[k] != r) ++k;
    const Assembled a = assemble_at(sweep.y[k]);
    sol.v.push_back(c1 * a.trace_resp + c2 * sweep.y[k][2] + a.part);
    sol.dv.push_back(c1 * a.dtrace_resp + c2 * sweep.y[k][3] + a.dpart);
  }
  const Assembled lo = assemble_at(sweep.y.front());
  const Assembled hi = assemble_at(sweep.y.back());
  sol.v_lo = c1 * lo.trace_resp + c2 * sweep.y.front()[2] + lo.part;
  sol.dv_lo = c1 * lo.dtrace_resp + c2 * sweep.y.front()[3] + lo.dpart;
  sol.v_hi = c1 * hi.trace_resp + c2 * sweep.y.back()[2] + hi.part;
  sol.dv_hi = c1 * hi.dtrace_resp + c2 * sweep.y.back()[3] + hi.dpart;
  return sol;
}

}  // namespace

CauchyPair cauchy_pair(const ModeOde& ode,
                       const std::vector<double>& out_nodes) {
  const std::vector<double> nodes = with_endpoints(ode, out_nodes);
  const Sweep sweep = integrate_mode(ode, nodes);
  CauchyPair pair;
  pair.r = nodes;
  const std::size_t n = nodes.size();
  pair.phi1.resize(n);
  pair.dphi1.resize(n);
  pair.phi2.resize(n);
  pair.dphi2.resize(n);
  pair.wronskian.resize(n);
  pair.abel.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& y = sweep.y[k];
    pair.phi1[k] = y[0];
    pair.dphi1[k] = y[1];
    pair.phi2[k] = y[2];
    pair.dphi2[k] = y[3];
    pair.wronskian[k] = y[0] * y[3] - y[1] * y[2];
    pair.abel[k] = std::exp(-y[4]);
  }
  return pair;
}

ModeSolution mode_bvp_solve(const ModeOde& ode, int n, double a, double h,
                            double dir_hi,
                            const std::vector<double>& out_nodes) {
  const std::vector<double> nodes = with_endpoints(ode, out_nodes);
  const Sweep sweep = integrate_mode(ode, nodes);
  const Assembled hi = assemble_at(sweep.y.back());
  const double phi2_hi = sweep.y.back()[2];

  // Rows:  a c1 + c2 = h   and   trace_resp(hi) c1 + phi2(hi) c2 = dir_hi - part(hi).
  const double det = a * phi2_hi - hi.trace_resp;
  const double scale =
      std::max({std::abs(a * phi2_hi), std::abs(hi.trace_resp), 1.0});
  if (!(std::abs(det) > 1e-12 * scale))
    throw numerical_error("mode_bvp: S-Condition violated at mode n=" +
                          std::to_string(n));
  const double rhs2 = dir_hi - hi.part;
  const double c1 = (h * phi2_hi - rhs2) / det;
  const double c2 = (a * rhs2 - h * hi.trace_resp) / det;

  ModeSolution sol = sample(sweep, out_nodes, c1, c2);
  sol.det = det;
  return sol;
}

ModeSolution robin_dirichlet_mode_solve(const ModeOde& ode, int n,
                                        double dir_lo, double g1, double h,
                                        const std::vector<double>& out_nodes) {
  if (ode.rnl)
    throw config_error("robin_dirichlet_mode_solve: no nonlocal term allowed");
  const std::vector<double> nodes = with_endpoints(ode, out_nodes);
  const Sweep sweep = integrate_mode(ode, nodes);
  const auto& yh = sweep.y.back();
  const Assembled hi = assemble_at(yh);

  const double c1 = dir_lo;
  const double denom = yh[3] + g1 * yh[2];  // (phi2' + g1 phi2)(hi)
  const double scale = std::max({std::abs(yh[3]), std::abs(g1 * yh[2]), 1.0});
  if (!(std::abs(denom) > 1e-12 * scale))
    throw numerical_error(
        "mode_bvp: subsonic stability condition violated at mode n=" +
        std::to_string(n));
  const double c2 =
      (h - c1 * (yh[1] + g1 * yh[0]) - (hi.dpart + g1 * hi.part)) / denom;

  ModeSolution sol = sample(sweep, out_nodes, c1, c2);
  sol.det = denom;
  return sol;
}

double mode_theta(const ModeOde& ode, double a) {
  const Sweep sweep = integrate_mode(ode, {ode.lo, ode.hi});
  const Assembled hi = assemble_at(sweep.y.back());
  return hi.trace_resp - a * sweep.y.back()[2];
}

}  // namespace eulershell
