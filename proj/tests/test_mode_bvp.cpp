#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "eulershell/errors.hpp"
#include "eulershell/mode_bvp.hpp"

using namespace eulershell;

namespace {

// Second-order finite-difference oracle on a uniform grid, independent of the
// variation-of-parameters path.  The nonlocal column is rank one, so it is
// peeled off with the Sherman-Morrison formula on top of a Thomas solve.
struct Tridiag {
  std::vector<double> a, b, c;  // sub / main / super
  std::vector<double> solve(std::vector<double> rhs) const {
    const std::size_t n = b.size();
    std::vector<double> cp(n), x(n);
    cp[0] = c[0] / b[0];
    rhs[0] /= b[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double m = b[i] - a[i] * cp[i - 1];
      cp[i] = c[i] / m;
      rhs[i] = (rhs[i] - a[i] * rhs[i - 1]) / m;
    }
    x[n - 1] = rhs[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = rhs[i] - cp[i] * x[i + 1];
    return x;
  }
};

std::vector<double> fd_trace_dirichlet(const ModeOde& ode, double a_row,
                                       double h, double dir_hi,
                                       std::size_t N) {
  const double dr = (ode.hi - ode.lo) / static_cast<double>(N);
  Tridiag T;
  T.a.assign(N + 1, 0.0);
  T.b.assign(N + 1, 0.0);
  T.c.assign(N + 1, 0.0);
  std::vector<double> F(N + 1, 0.0), u(N + 1, 0.0);
  for (std::size_t i = 1; i < N; ++i) {
    const double r = ode.lo + dr * static_cast<double>(i);
    T.a[i] = 1.0 / (dr * dr) - ode.p(r) / (2.0 * dr);
    T.b[i] = -2.0 / (dr * dr) + ode.q(r);
    T.c[i] = 1.0 / (dr * dr) + ode.p(r) / (2.0 * dr);
    F[i] = ode.f ? ode.f(r) : 0.0;
    u[i] = ode.rnl ? -ode.rnl(r) : 0.0;
  }
  // One-sided second-order trace row (-3v0+4v1-v2)/(2dr) + a_row v0 = h, with
  // the v2 entry eliminated against interior row 1 to stay tridiagonal.
  const double g02 = -1.0 / (2.0 * dr);
  const double m = g02 / T.c[1];
  T.b[0] = -3.0 / (2.0 * dr) + a_row - m * T.a[1];
  T.c[0] = 4.0 / (2.0 * dr) - m * T.b[1];
  F[0] = h - m * F[1];
  u[0] = -m * u[1];
  T.b[N] = 1.0;
  F[N] = dir_hi;

  const std::vector<double> x = T.solve(F);
  const std::vector<double> y = T.solve(u);
  std::vector<double> v(N + 1);
  const double s = x[0] / (1.0 + y[0]);
  for (std::size_t i = 0; i <= N; ++i) v[i] = x[i] - y[i] * s;
  return v;
}

std::vector<double> fd_dirichlet_robin(const ModeOde& ode, double dir_lo,
                                       double g1, double h, std::size_t N) {
  const double dr = (ode.hi - ode.lo) / static_cast<double>(N);
  Tridiag T;
  T.a.assign(N + 1, 0.0);
  T.b.assign(N + 1, 0.0);
  T.c.assign(N + 1, 0.0);
  std::vector<double> F(N + 1, 0.0);
  for (std::size_t i = 1; i < N; ++i) {
    const double r = ode.lo + dr * static_cast<double>(i);
    T.a[i] = 1.0 / (dr * dr) - ode.p(r) / (2.0 * dr);
    T.b[i] = -2.0 / (dr * dr) + ode.q(r);
    T.c[i] = 1.0 / (dr * dr) + ode.p(r) / (2.0 * dr);
    F[i] = ode.f ? ode.f(r) : 0.0;
  }
  T.b[0] = 1.0;
  F[0] = dir_lo;
  // Robin row (3vN-4v{N-1}+v{N-2})/(2dr) + g1 vN = h, v{N-2} eliminated.
  const double gN2 = 1.0 / (2.0 * dr);
  const double m = gN2 / T.a[N - 1];
  T.a[N] = -4.0 / (2.0 * dr) - m * T.b[N - 1];
  T.b[N] = 3.0 / (2.0 * dr) + g1 - m * T.c[N - 1];
  F[N] = h - m * F[N - 1];
  return T.solve(F);
}

ModeOde sample_ode() {
  ModeOde ode;
  ode.lo = 1.5;
  ode.hi = 2.0;
  ode.p = [](double r) { return 0.8 / r; };
  ode.q = [](double r) { return -(3.0 + 0.5 * std::sin(2.0 * r)); };
  ode.f = [](double r) { return std::sin(3.0 * r); };
  ode.rnl = [](double r) { return 0.4 * std::cos(r); };
  return ode;
}

std::vector<double> uniform(double lo, double hi, std::size_t n) {
  std::vector<double> r(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    r[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  r.back() = hi;
  return r;
}

}  // namespace

TEST_CASE("cauchy pair with p = q = 0 is (1, r - lo)") {
  ModeOde ode;
  ode.lo = 1.5;
  ode.hi = 2.0;
  ode.p = [](double) { return 0.0; };
  ode.q = [](double) { return 0.0; };
  const auto pair = cauchy_pair(ode, uniform(1.5, 2.0, 8));
  for (std::size_t k = 0; k < pair.r.size(); ++k) {
    CHECK(pair.phi1[k] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pair.dphi1[k] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(pair.phi2[k] == doctest::Approx(pair.r[k] - 1.5).epsilon(1e-13));
    CHECK(pair.dphi2[k] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pair.wronskian[k] == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("wronskian matches the closed-form Abel factor") {
  // p = 0.8/r integrates exactly: W(r) = (lo/r)^0.8.
  const ModeOde ode = sample_ode();
  const auto pair = cauchy_pair(ode, uniform(1.5, 2.0, 16));
  for (std::size_t k = 0; k < pair.r.size(); ++k) {
    const double exact = std::pow(1.5 / pair.r[k], 0.8);
    CHECK(std::abs(pair.wronskian[k] - exact) < 1e-10);
    CHECK(std::abs(pair.abel[k] - exact) < 1e-12);
  }
}

TEST_CASE("zero data gives the zero solution") {
  ModeOde ode = sample_ode();
  ode.f = nullptr;
  const auto sol = mode_bvp_solve(ode, 3, 1.3, 0.0, 0.0, uniform(1.5, 2.0, 20));
  for (double v : sol.v) CHECK(std::abs(v) < 1e-14);
  for (double dv : sol.dv) CHECK(std::abs(dv) < 1e-14);
}

TEST_CASE("trace-row solve satisfies both boundary rows") {
  const ModeOde ode = sample_ode();
  const double a = 1.3, h = 0.6, dir = 0.25;
  const auto sol = mode_bvp_solve(ode, 3, a, h, dir, uniform(1.5, 2.0, 10));
  CHECK(std::abs(sol.dv_lo + a * sol.v_lo - h) < 1e-9);
  CHECK(std::abs(sol.v_hi - dir) < 1e-9);
}

TEST_CASE("interior residual of the nonlocal equation is tiny") {
  const ModeOde ode = sample_ode();
  const std::size_t n = 500;
  const auto nodes = uniform(1.5, 2.0, n);
  const double dr = nodes[1] - nodes[0];
  const auto sol = mode_bvp_solve(ode, 3, 1.3, 0.6, 0.25, nodes);
  // v'' from a fourth-order stencil on the returned derivative samples.
  for (std::size_t i = 2; i + 2 < nodes.size(); i += 25) {
    const double d2v = (-sol.dv[i + 2] + 8.0 * sol.dv[i + 1] -
                        8.0 * sol.dv[i - 1] + sol.dv[i - 2]) /
                       (12.0 * dr);
    const double r = nodes[i];
    const double res = d2v + ode.p(r) * sol.dv[i] + ode.q(r) * sol.v[i] -
                       ode.f(r) - ode.rnl(r) * sol.v_lo;
    CHECK(std::abs(res) < 1e-8);
  }
}

TEST_CASE("trace-row solve matches the finite-difference oracle") {
  const ModeOde ode = sample_ode();
  const std::size_t N = 2000;
  const auto nodes = uniform(ode.lo, ode.hi, N);
  const auto sol = mode_bvp_solve(ode, 3, 1.3, 0.6, 0.25, nodes);
  const auto fd = fd_trace_dirichlet(ode, 1.3, 0.6, 0.25, N);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i <= N; ++i) {
    err = std::max(err, std::abs(sol.v[i] - fd[i]));
    scale = std::max(scale, std::abs(fd[i]));
  }
  CHECK(err < 1e-5 * std::max(scale, 1.0));
}

TEST_CASE("solver is linear in the data") {
  ModeOde ode = sample_ode();
  const auto nodes = uniform(1.5, 2.0, 12);
  const auto s1 = mode_bvp_solve(ode, 3, 1.3, 0.6, 0.0, nodes);
  ModeOde ode2 = ode;
  ode2.f = [](double r) { return std::cos(2.0 * r); };
  const auto s2 = mode_bvp_solve(ode2, 3, 1.3, -0.2, 0.0, nodes);
  ModeOde sum = ode;
  sum.f = [](double r) { return std::sin(3.0 * r) + std::cos(2.0 * r); };
  const auto s12 = mode_bvp_solve(sum, 3, 1.3, 0.4, 0.0, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    CHECK(std::abs(s12.v[i] - s1.v[i] - s2.v[i]) < 1e-10);
}

TEST_CASE("determinant equals minus the mode theta quantity") {
  const ModeOde ode = sample_ode();
  const double a = 1.3;
  const auto sol = mode_bvp_solve(ode, 3, a, 0.6, 0.25, {});
  CHECK(sol.det == doctest::Approx(-mode_theta(ode, a)).epsilon(1e-12));
}

TEST_CASE("robin-dirichlet solve satisfies rows and matches the FD oracle") {
  ModeOde ode = sample_ode();
  ode.rnl = nullptr;
  const double dir = 0.4, g1 = 3.2, h = -0.5;
  const std::size_t N = 2000;
  const auto nodes = uniform(ode.lo, ode.hi, N);
  const auto sol = robin_dirichlet_mode_solve(ode, 2, dir, g1, h, nodes);
  CHECK(std::abs(sol.v_lo - dir) < 1e-12);
  CHECK(std::abs(sol.dv_hi + g1 * sol.v_hi - h) < 1e-9);
  const auto fd = fd_dirichlet_robin(ode, dir, g1, h, N);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i <= N; ++i) {
    err = std::max(err, std::abs(sol.v[i] - fd[i]));
    scale = std::max(scale, std::abs(fd[i]));
  }
  CHECK(err < 1e-5 * std::max(scale, 1.0));

  ModeOde zero = ode;
  zero.f = nullptr;
  const auto z = robin_dirichlet_mode_solve(zero, 2, 0.0, g1, 0.0, {});
  CHECK(std::abs(z.v_hi) < 1e-14);
}

TEST_CASE("nonlocal term is rejected in the robin-dirichlet path") {
  const ModeOde ode = sample_ode();
  CHECK_THROWS_AS(robin_dirichlet_mode_solve(ode, 2, 0.0, 3.0, 0.0, {}),
                  config_error);
}
