#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "eulershell/errors.hpp"
#include "eulershell/sphere.hpp"

using namespace eulershell;
namespace {
constexpr double kPi = std::numbers::pi;

// Independent closed-form harmonics used to pin the basis convention.
double Y10(double th) { return std::sqrt(3.0 / (4.0 * kPi)) * std::cos(th); }
double Y11(double th, double ph) {
  return std::sqrt(3.0 / (4.0 * kPi)) * std::sin(th) * std::cos(ph);
}
double Y2m1(double th, double ph) {
  return std::sqrt(2.0) * std::sqrt(5.0 / (24.0 * kPi)) * 3.0 * std::cos(th) *
         std::sin(th) * std::sin(ph);
}
double Y32(double th, double ph) {
  const double x = std::cos(th);
  return std::sqrt(2.0) * std::sqrt(7.0 / (480.0 * kPi)) * 15.0 * x *
         (1.0 - x * x) * std::cos(2.0 * ph);
}

SphCoeffs unit_coeff(int lmax, int n, int m) {
  SphCoeffs c(lmax);
  c(n, m) = 1.0;
  return c;
}

SphCoeffs random_coeffs(int lmax, int max_degree, unsigned seed,
                        bool zero_mean = false) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  SphCoeffs c(lmax);
  for (int n = zero_mean ? 1 : 0; n <= max_degree; ++n)
    for (int m = -n; m <= n; ++m) c(n, m) = U(rng);
  return c;
}
}  // namespace

TEST_CASE("basis convention: positive-m harmonics carry cos(m phi), no phase") {
  const SphereGrid g(8);
  // Y_{1,1}(pi/2, 0) = +sqrt(3/4pi): a sign flip here means the
  // Condon-Shortley phase leaked into the tables.
  const auto c11 = unit_coeff(8, 1, 1);
  CHECK(synth_point(c11, kPi / 2, 0.0) ==
        doctest::Approx(std::sqrt(3.0 / (4.0 * kPi))).epsilon(1e-13));
  for (double th : {0.4, 1.2, 2.6})
    for (double ph : {0.0, 0.9, 4.4}) {
      CHECK(synth_point(c11, th, ph) == doctest::Approx(Y11(th, ph)).epsilon(1e-12));
      CHECK(synth_point(unit_coeff(8, 1, 0), th, ph) ==
            doctest::Approx(Y10(th)).epsilon(1e-12));
      CHECK(synth_point(unit_coeff(8, 2, -1), th, ph) ==
            doctest::Approx(Y2m1(th, ph)).epsilon(1e-12));
      CHECK(synth_point(unit_coeff(8, 3, 2), th, ph) ==
            doctest::Approx(Y32(th, ph)).epsilon(1e-12));
    }
}

TEST_CASE("analyze/synthesize round trip is exact for every mode") {
  const SphereGrid g(8);
  for (int n = 0; n <= 8; ++n)
    for (int m = -n; m <= n; ++m) {
      const auto c = unit_coeff(8, n, m);
      const auto back = g.analyze(g.synthesize(c));
      for (int n2 = 0; n2 <= 8; ++n2)
        for (int m2 = -n2; m2 <= n2; ++m2) {
          const double want = (n2 == n && m2 == m) ? 1.0 : 0.0;
          CHECK(std::abs(back(n2, m2) - want) < 1e-12);
        }
    }
}

TEST_CASE("quadrature: constants and mode orthogonality") {
  const SphereGrid g(6);
  const std::vector<double> ones(g.npoints(), 1.0);
  CHECK(g.integrate(ones) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
  const auto c00 = g.analyze(ones);
  CHECK(c00(0, 0) == doctest::Approx(std::sqrt(4.0 * kPi)).epsilon(1e-14));
  for (int n = 1; n <= 6; ++n)
    for (int m = -n; m <= n; ++m) CHECK(std::abs(c00(n, m)) < 1e-13);

  // ||Y_{4,3}||^2 = 1 and <Y_{4,3}, Y_{5,3}> = 0 by direct quadrature.
  const auto y43 = g.synthesize(unit_coeff(6, 4, 3));
  const auto y53 = g.synthesize(unit_coeff(6, 5, 3));
  std::vector<double> prod(g.npoints()), cross(g.npoints());
  for (std::size_t i = 0; i < g.npoints(); ++i) {
    prod[i] = y43[i] * y43[i];
    cross[i] = y43[i] * y53[i];
  }
  CHECK(g.integrate(prod) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(g.integrate(cross)) < 1e-13);
}

TEST_CASE("point synthesis agrees with grid synthesis and derivatives") {
  const SphereGrid g(7);
  const auto c = random_coeffs(7, 7, 42u);
  const auto f = g.synthesize(c);
  const int i = g.nlat() / 2, k = 3;
  CHECK(synth_point(c, g.theta(i), g.phi(k)) ==
        doctest::Approx(f[g.index(i, k)]).epsilon(1e-13));

  const double th = 1.234, ph = 2.345, h = 1e-6;
  double v, dth, dph_s;
  synth_point_with_grad(c, th, ph, v, dth, dph_s);
  CHECK(v == doctest::Approx(synth_point(c, th, ph)).epsilon(1e-13));
  const double fd_t =
      (synth_point(c, th + h, ph) - synth_point(c, th - h, ph)) / (2 * h);
  const double fd_p =
      (synth_point(c, th, ph + h) - synth_point(c, th, ph - h)) / (2 * h);
  CHECK(dth == doctest::Approx(fd_t).epsilon(1e-7));
  CHECK(dph_s == doctest::Approx(fd_p / std::sin(th)).epsilon(1e-7));
}

TEST_CASE("surface gradient of a zonal harmonic") {
  const SphereGrid g(8);
  // f = Y_{1,0}: grad f = -sqrt(3/4pi) sin(theta) e_theta.
  const auto w = surface_gradient(g, unit_coeff(8, 1, 0));
  const double a = std::sqrt(3.0 / (4.0 * kPi));
  for (int i = 0; i < g.nlat(); ++i)
    for (int k = 0; k < g.nlon(); ++k) {
      const std::size_t s = g.index(i, k);
      const auto et = g.unit_theta(i, k);
      const double want = -a * std::sin(g.theta(i));
      CHECK(w.x[s] == doctest::Approx(want * et[0]).epsilon(1e-12).scale(1.0));
      CHECK(w.y[s] == doctest::Approx(want * et[1]).epsilon(1e-12).scale(1.0));
      CHECK(w.z[s] == doctest::Approx(want * et[2]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("laplace-beltrami symbol and div(grad) agree") {
  const SphereGrid g(9);
  const auto c = random_coeffs(9, 8, 7u);  // one degree of headroom
  const auto lb = g.synthesize(c.laplace_beltrami());
  const auto div = surface_divergence(g, surface_gradient(g, c));
  for (std::size_t s = 0; s < g.npoints(); ++s)
    CHECK(div[s] == doctest::Approx(lb[s]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("rotation J is a tangent-plane quarter turn") {
  const SphereGrid g(5);
  const auto c = random_coeffs(5, 4, 3u);
  const auto w = surface_gradient(g, c);
  const auto jw = rotate_tangent(g, w);
  const auto jjw = rotate_tangent(g, jw);
  for (std::size_t s = 0; s < g.npoints(); ++s) {
    CHECK(jjw.x[s] == doctest::Approx(-w.x[s]).epsilon(1e-13).scale(1.0));
    CHECK(jjw.y[s] == doctest::Approx(-w.y[s]).epsilon(1e-13).scale(1.0));
    CHECK(jjw.z[s] == doctest::Approx(-w.z[s]).epsilon(1e-13).scale(1.0));
    // |Jw| = |w| and Jw . w = 0
    const double n1 = w.x[s] * w.x[s] + w.y[s] * w.y[s] + w.z[s] * w.z[s];
    const double n2 =
        jw.x[s] * jw.x[s] + jw.y[s] * jw.y[s] + jw.z[s] * jw.z[s];
    CHECK(n2 == doctest::Approx(n1).epsilon(1e-12).scale(1.0));
    const double dot =
        jw.x[s] * w.x[s] + jw.y[s] * w.y[s] + jw.z[s] * w.z[s];
    CHECK(std::abs(dot) < 1e-12);
  }
}

TEST_CASE("curl conventions: curl(grad)=0, curl(J grad b)=LB b") {
  const SphereGrid g(9);
  const auto cb = random_coeffs(9, 8, 11u);
  const auto curl_grad = surface_curl(g, surface_gradient(g, cb));
  for (double v : curl_grad) CHECK(std::abs(v) < 1e-9);
  const auto jgb = rotate_tangent(g, surface_gradient(g, cb));
  const auto curl_jgb = surface_curl(g, jgb);
  const auto lb = g.synthesize(cb.laplace_beltrami());
  for (std::size_t s = 0; s < g.npoints(); ++s)
    CHECK(curl_jgb[s] == doctest::Approx(lb[s]).epsilon(1e-9).scale(1.0));
  const auto div_jgb = surface_divergence(g, jgb);
  for (double v : div_jgb) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("div/curl recovery returns the original tangent field") {
  const SphereGrid g(10);
  const auto ca = random_coeffs(10, 8, 21u, true);
  const auto cb = random_coeffs(10, 8, 22u, true);
  const auto ga = surface_gradient(g, ca);
  const auto jgb = rotate_tangent(g, surface_gradient(g, cb));
  SphereVec w(g.npoints());
  for (std::size_t s = 0; s < g.npoints(); ++s) {
    w.x[s] = ga.x[s] + jgb.x[s];
    w.y[s] = ga.y[s] + jgb.y[s];
    w.z[s] = ga.z[s] + jgb.z[s];
  }
  const auto dc = g.analyze(surface_divergence(g, w));
  const auto cc = g.analyze(surface_curl(g, w));
  const auto w2 = div_curl_solve(g, dc, cc);
  for (std::size_t s = 0; s < g.npoints(); ++s) {
    CHECK(w2.x[s] == doctest::Approx(w.x[s]).epsilon(1e-8).scale(1.0));
    CHECK(w2.y[s] == doctest::Approx(w.y[s]).epsilon(1e-8).scale(1.0));
    CHECK(w2.z[s] == doctest::Approx(w.z[s]).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("div/curl recovery rejects data with nonzero mean") {
  const SphereGrid g(4);
  SphCoeffs dc(4), cc(4);
  dc(0, 0) = 1.0;
  CHECK_THROWS_AS(div_curl_solve(g, dc, cc), numerical_error);
}

TEST_CASE("tangent projection removes the radial part") {
  const SphereGrid g(4);
  SphereVec v(g.npoints());
  for (std::size_t s = 0; s < g.npoints(); ++s) {
    v.x[s] = 1.0;
    v.y[s] = -0.5;
    v.z[s] = 2.0;
  }
  const auto t = project_tangent(g, v);
  for (int i = 0; i < g.nlat(); ++i)
    for (int k = 0; k < g.nlon(); ++k) {
      const std::size_t s = g.index(i, k);
      const auto P = g.unit_radial(i, k);
      const double dot = P[0] * t.x[s] + P[1] * t.y[s] + P[2] * t.z[s];
      CHECK(std::abs(dot) < 1e-14);
    }
}
