#include "eulershell/coeffs.hpp"

#include <cmath>

#include "eulershell/errors.hpp"

namespace eulershell {

double stability_poly(double gamma, double t) {
  const double g = gamma;
  return g * (1.0 + 2.0 * g) * t * t * t * t +
         (-4.0 * g * g + 2.0 * g - 3.0) * t * t * t +
         (14.0 - 7.0 * g) * t * t - 19.0 * t + 6.0;
}

double stability_root(double gamma) {
  double a = 0.0, b = 1.0;
  if (!(stability_poly(gamma, a) > 0.0) || !(stability_poly(gamma, b) < 0.0))
    throw numerical_error("stability polynomial has unexpected signs");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    (stability_poly(gamma, mid) > 0.0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

namespace {
void check_subsonic_t(double t) {
  if (!(t >= 0.0) || !(t < 1.0))
    throw numerical_error("coefficient functions need 0 <= t < 1");
}
}  // namespace

double coeff_b(double gamma, double t) {
  check_subsonic_t(t);
  return ((1.0 + 2.0 * gamma) * t * t - 3.0 * t + 4.0) / (2.0 * (t - 1.0));
}

double coeff_e(double gamma, double t) {
  check_subsonic_t(t);
  const double d = t - 1.0;
  return 2.0 * stability_poly(gamma, t) / (d * d * d);
}

double coeff_d1(double gamma, double t) {
  check_subsonic_t(t);
  const double d = t - 1.0;
  return 4.0 * ((2.0 * gamma - 3.0) * t * t + 8.0 * t - 3.0) / (d * d * d);
}

double coeff_d2(double gamma, double t) {
  return -(2.0 + (gamma - 1.0) * t) * coeff_d1(gamma, t) /
         (2.0 * (gamma - 1.0));
}

double robin_gamma1(const GasConstants& gas, double t, double r) {
  check_subsonic_t(t);
  const double d = 1.0 - t;
  return (2.0 / r) * (gas.gamma * t * t - t + 2.0) / (d * d);
}

LinearizedCoeffs linearized_coeffs(const GasConstants& gas,
                                   const RadialProfile& prof, double r) {
  const RadialState st = prof.eval(r);
  const double M = st.mach(gas);
  const double t = M * M;
  check_subsonic_t(t);
  LinearizedCoeffs lc;
  lc.r = r;
  lc.t = t;
  lc.e1 = r * r * (t - 1.0);
  lc.e2 = 4.0 * r * coeff_b(gas.gamma, t);
  lc.e3 = coeff_e(gas.gamma, t);
  lc.d1_term = st.rho * coeff_d1(gas.gamma, t);
  lc.d2_term = std::pow(st.rho, gas.gamma) * coeff_d2(gas.gamma, t);
  lc.gamma1 = robin_gamma1(gas, t, r);
  return lc;
}

}  // namespace eulershell
