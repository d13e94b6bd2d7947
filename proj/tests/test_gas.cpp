#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "eulershell/gas.hpp"

using namespace eulershell;

TEST_CASE("sound speed and Bernoulli invariant") {
  GasConstants gas;  // gamma = 1.4
  CHECK(sound_speed(gas, 1.0, 1.0) == doctest::Approx(std::sqrt(1.4)));
  CHECK(sound_speed(gas, 2.0, 0.5) == doctest::Approx(std::sqrt(5.6)));
  const double c2 = 1.4;
  CHECK(bernoulli(gas, 0.35, c2) == doctest::Approx(0.175 + c2 / 0.4));
}

TEST_CASE("entropy function round trips and matches p rho^-gamma") {
  GasConstants gas;
  gas.c_v = 0.7;
  gas.k0 = 2.0;
  const double s = 0.31;
  const double A = entropy_function(gas, s);
  CHECK(entropy_from_A(gas, A) == doctest::Approx(s).epsilon(1e-14));
  const double rho = 1.3, p = 0.9;
  const double As = A_from_state(gas, p, rho);
  CHECK(As == doctest::Approx(p * std::pow(rho, -1.4)).epsilon(1e-14));
  CHECK(rho_from_pA(gas, p, As) == doctest::Approx(rho).epsilon(1e-14));
}

TEST_CASE("radial state derived quantities") {
  GasConstants gas;
  RadialState st{0.5 * std::sqrt(1.4), 1.0, 1.0};  // Mach 0.5
  CHECK(st.mach(gas) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(st.E(gas) == doctest::Approx(0.175 + 3.5).epsilon(1e-14));
  CHECK(st.A(gas) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("invalid inputs are rejected") {
  GasConstants gas;
  CHECK_THROWS_AS(sound_speed(gas, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(sound_speed(gas, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(rho_from_pA(gas, 1.0, -2.0), std::domain_error);
  GasConstants bad;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.gamma = 1.4;
  bad.c_v = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
