#include "eulershell/fields.hpp"

#include <cmath>

#include "eulershell/cheb.hpp"
#include "eulershell/errors.hpp"

namespace eulershell {

ShellGrid::ShellGrid(int n_r, double r_lo, double r_hi,
                     std::shared_ptr<const SphereGrid> sphere)
    : sphere_(std::move(sphere)) {
  if (n_r < 2 || !(r_lo < r_hi) || !(r_lo > 0.0))
    throw config_error("shell grid needs nr >= 2 and 0 < r_lo < r_hi");
  r_ = cheb_nodes(static_cast<std::size_t>(n_r), r_lo, r_hi);
  rw_ = clenshaw_curtis_weights(static_cast<std::size_t>(n_r), r_lo, r_hi);
  bw_ = cheb_bary_weights(static_cast<std::size_t>(n_r));
  D_ = diff_matrix(r_, bw_);
}

void ShellGrid::radial_derivative(const std::vector<double>& col,
                                  std::vector<double>& out) const {
  apply_matrix(D_, col, out);
}

double ShellGrid::interp_column(const std::vector<double>& col,
                                double r) const {
  return bary_eval(r_, bw_, col, r);
}

std::vector<double> ScalarField::level(int ir) const {
  const std::size_t n = grid->nsph();
  std::vector<double> out(n);
  const double* src = v.data() + grid->index(ir, 0);
  std::copy(src, src + n, out.begin());
  return out;
}

void ScalarField::set_level(int ir, const std::vector<double>& sph) {
  if (sph.size() != grid->nsph())
    throw config_error("level size does not match the sphere grid");
  std::copy(sph.begin(), sph.end(), v.begin() + grid->index(ir, 0));
}

SphereVec TangentField::level(int ir) const {
  SphereVec w(x.grid->nsph());
  w.x = x.level(ir);
  w.y = y.level(ir);
  w.z = z.level(ir);
  return w;
}

void TangentField::set_level(int ir, const SphereVec& w) {
  x.set_level(ir, w.x);
  y.set_level(ir, w.y);
  z.set_level(ir, w.z);
}

ScalarField radial_derivative(const ScalarField& f) {
  const ShellGrid& g = *f.grid;
  ScalarField out(f.grid);
  const int nr = g.nr();
  const std::size_t ns = g.nsph();
  const std::vector<double>& D = g.diff();
  // Apply the dense radial matrix across all sphere points at once.
  for (int i = 0; i < nr; ++i) {
    double* dst = out.v.data() + g.index(i, 0);
    for (int j = 0; j < nr; ++j) {
      const double dij = D[static_cast<std::size_t>(i) * nr + j];
      if (dij == 0.0) continue;
      const double* src = f.v.data() + g.index(j, 0);
      for (std::size_t s = 0; s < ns; ++s) dst[s] += dij * src[s];
    }
  }
  return out;
}

StateField state_from_profile(std::shared_ptr<const ShellGrid> grid,
                              const RadialProfile& prof) {
  StateField st(grid);
  const GasConstants& gas = prof.gas();
  for (int ir = 0; ir < grid->nr(); ++ir) {
    const RadialState rs = prof.eval(grid->r(ir));
    const double E = rs.E(gas), A = rs.A(gas);
    for (std::size_t s = 0; s < grid->nsph(); ++s) {
      const std::size_t t = grid->index(ir, s);
      st.p.v[t] = rs.p;
      st.rho.v[t] = rs.rho;
      st.u0.v[t] = rs.u;
      st.E.v[t] = E;
      st.A.v[t] = A;
    }
  }
  return st;
}

double shell_integral(const ScalarField& f) {
  const ShellGrid& g = *f.grid;
  double total = 0.0;
  std::vector<double> lvl;
  for (int ir = 0; ir < g.nr(); ++ir) {
    lvl = f.level(ir);
    const double r = g.r(ir);
    total += g.radial_weight(ir) * r * r * g.sphere().integrate(lvl);
  }
  return total;
}

double shell_l2(const ScalarField& f) {
  ScalarField sq(f.grid);
  for (std::size_t i = 0; i < f.v.size(); ++i) sq.v[i] = f.v[i] * f.v[i];
  return std::sqrt(shell_integral(sq));
}

double shell_linf(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double shell_linf(const TangentField& w) {
  double m = 0.0;
  for (std::size_t i = 0; i < w.x.v.size(); ++i) {
    const double n2 = w.x.v[i] * w.x.v[i] + w.y.v[i] * w.y.v[i] +
                      w.z.v[i] * w.z.v[i];
    m = std::max(m, n2);
  }
  return std::sqrt(m);
}

}  // namespace eulershell
