#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"
#include "eulershell/fields.hpp"
#include "eulershell/io.hpp"
#include "eulershell/residual.hpp"

using namespace eulershell;
namespace {
constexpr double kPi = std::numbers::pi;

std::shared_ptr<const ShellGrid> make_grid(int nr, double a, double b,
                                           int lmax) {
  return std::make_shared<ShellGrid>(nr, a, b, std::make_shared<SphereGrid>(lmax));
}
}  // namespace

TEST_CASE("shell quadrature integrates the volume exactly") {
  const auto g = make_grid(17, 1.0, 2.0, 4);
  ScalarField one(g, 1.0);
  CHECK(shell_integral(one) ==
        doctest::Approx(4.0 * kPi / 3.0 * (8.0 - 1.0)).epsilon(1e-13));
  CHECK(shell_l2(one) ==
        doctest::Approx(std::sqrt(4.0 * kPi / 3.0 * 7.0)).epsilon(1e-13));
}

TEST_CASE("radial derivative of a cubic is exact") {
  const auto g = make_grid(17, 1.0, 2.0, 2);
  ScalarField f(g);
  for (int ir = 0; ir < g->nr(); ++ir)
    for (std::size_t s = 0; s < g->nsph(); ++s)
      f.at(ir, s) = std::pow(g->r(ir), 3);
  const ScalarField df = radial_derivative(f);
  for (int ir = 0; ir < g->nr(); ++ir)
    for (std::size_t s = 0; s < g->nsph(); ++s)
      CHECK(df.at(ir, s) ==
            doctest::Approx(3.0 * g->r(ir) * g->r(ir)).epsilon(1e-12));
}

TEST_CASE("background state has machine-zero euler residuals") {
  const GasConstants gas;
  const RadialState anchor{0.5 * std::sqrt(1.4), 1.0, 1.0};
  const SubsonicEntry entry{anchor.E(gas), entropy_from_A(gas, anchor.A(gas)),
                            1.0};
  const auto prof = solve_subsonic_background(gas, 1.0, 1.4, entry, 121);
  const auto g = make_grid(48, 1.0, 1.4, 6);
  const StateField st = state_from_profile(g, prof);
  const EulerResidual res = euler_residual(st);
  CHECK(shell_linf(res.mass) < 1e-8);
  CHECK(shell_linf(res.mom_r) < 1e-8);
  CHECK(shell_linf(res.mom_t) < 1e-10);
  CHECK(shell_linf(res.energy) < 1e-8);
  CHECK(shell_linf(res.entropy) < 1e-10);
}

TEST_CASE("vorticity identity holds for a generic smooth state") {
  // The identity grad(|V|^2/2) - (V.grad)V = V x curl V is exact for any
  // smooth velocity, so the gap isolates derivative-machinery errors.
  const auto g = make_grid(24, 1.0, 1.5, 12);
  const SphereGrid& sph = g->sphere();
  StateField st(g);
  const SphCoeffs c20 = [] {
    SphCoeffs c(12);
    c(2, 0) = 1.0;
    c(2, 1) = 0.4;
    return c;
  }();
  const SphCoeffs c31 = [] {
    SphCoeffs c(12);
    c(3, 1) = 0.7;
    c(1, -1) = 0.3;
    return c;
  }();
  const SphereVec ga = surface_gradient(sph, c20);
  const SphereVec jb = rotate_tangent(sph, surface_gradient(sph, c31));
  const auto y11 = sph.synthesize([] {
    SphCoeffs c(12);
    c(1, 1) = 1.0;
    return c;
  }());
  for (int ir = 0; ir < g->nr(); ++ir) {
    const double r = g->r(ir);
    const double fr = 1.0 + 0.2 * (r - 1.0) * (r - 1.0);
    for (std::size_t s = 0; s < g->nsph(); ++s) {
      const std::size_t t = g->index(ir, s);
      st.u0.v[t] = 1.0 + 0.3 * y11[s] * (r - 1.2);
      st.w.x.v[t] = fr * (0.5 * ga.x[s] + 0.25 * jb.x[s]);
      st.w.y.v[t] = fr * (0.5 * ga.y[s] + 0.25 * jb.y[s]);
      st.w.z.v[t] = fr * (0.5 * ga.z[s] + 0.25 * jb.z[s]);
      st.p.v[t] = 1.0;
      st.rho.v[t] = 1.0;
    }
  }
  CHECK(vorticity_identity_gap(st) < 1e-9);
}

TEST_CASE("shell CSV round trip preserves the state bit-for-bit") {
  const GasConstants gas;
  const auto g = make_grid(6, 1.0, 1.3, 3);
  const SphereGrid& sph = g->sphere();
  StateField st(g);
  for (int ir = 0; ir < g->nr(); ++ir)
    for (int i = 0; i < sph.nlat(); ++i)
      for (int k = 0; k < sph.nlon(); ++k) {
        const std::size_t t = g->index(ir, sph.index(i, k));
        const double r = g->r(ir);
        st.u0.v[t] = 0.3 + 0.01 * r * std::cos(sph.theta(i));
        st.p.v[t] = 1.0 + 0.05 * std::sin(sph.phi(k));
        st.rho.v[t] = 0.9 + 0.02 * r;
        // swirl about the z axis: tangent by construction
        const auto P = sph.unit_radial(i, k);
        st.w.x.v[t] = -0.04 * r * P[1];
        st.w.y.v[t] = 0.04 * r * P[0];
        st.w.z.v[t] = 0.0;
      }
  const std::string path = "shell_roundtrip_test.csv";
  write_shell_csv(path, st);
  const StateField back = read_shell_csv(path, g, gas);
  for (std::size_t t = 0; t < st.p.v.size(); ++t) {
    CHECK(back.u0.v[t] == doctest::Approx(st.u0.v[t]).epsilon(1e-14));
    CHECK(back.p.v[t] == doctest::Approx(st.p.v[t]).epsilon(1e-14));
    CHECK(back.rho.v[t] == doctest::Approx(st.rho.v[t]).epsilon(1e-14));
    CHECK(back.w.x.v[t] ==
          doctest::Approx(st.w.x.v[t]).epsilon(1e-12).scale(1.0));
    CHECK(back.w.y.v[t] ==
          doctest::Approx(st.w.y.v[t]).epsilon(1e-12).scale(1.0));
    CHECK(back.w.z.v[t] ==
          doctest::Approx(st.w.z.v[t]).epsilon(1e-12).scale(1.0));
  }
  std::remove(path.c_str());
}

TEST_CASE("coefficient CSV round trip") {
  SphCoeffs c(3);
  c(0, 0) = 1.25;
  c(2, -1) = -0.625;
  c(3, 3) = 1e-13;
  const std::string path = "coeffs_roundtrip_test.csv";
  write_coeffs_csv(path, c);
  const SphCoeffs back = read_coeffs_csv(path);
  REQUIRE(back.lmax() == 3);
  for (int n = 0; n <= 3; ++n)
    for (int m = -n; m <= n; ++m) CHECK(back(n, m) == c(n, m));
  std::remove(path.c_str());
}

TEST_CASE("background CSV lists the profile nodes") {
  const GasConstants gas;
  const RadialState anchor{0.5 * std::sqrt(1.4), 1.0, 1.0};
  const SubsonicEntry entry{anchor.E(gas), entropy_from_A(gas, anchor.A(gas)),
                            1.0};
  const auto prof = solve_subsonic_background(gas, 1.0, 1.2, entry, 33);
  const std::string path = "background_test.csv";
  write_background_csv(path, prof);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,u,p,rho,M,E,A");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 33);
  std::remove(path.c_str());
}
