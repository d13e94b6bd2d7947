// Ideal polytropic gas relations shared across the suite.
#pragma once

#include <cmath>
#include <stdexcept>

namespace eulershell {

struct GasConstants {
  double gamma = 1.4;  // adiabatic exponent, > 1
  double c_v = 1.0;    // specific heat at constant volume
  double k0 = 1.0;     // entropy-function scale

  void validate() const {
    if (!(gamma > 1.0)) throw std::invalid_argument("gas: gamma must be > 1");
    if (!(c_v > 0.0)) throw std::invalid_argument("gas: c_v must be > 0");
    if (!(k0 > 0.0)) throw std::invalid_argument("gas: k0 must be > 0");
  }
};

inline double sound_speed(const GasConstants& gas, double p, double rho) {
  if (!(p > 0.0) || !(rho > 0.0))
    throw std::domain_error("sound_speed: p and rho must be positive");
  return std::sqrt(gas.gamma * p / rho);
}

// Total enthalpy-like invariant E = |u|^2/2 + c^2/(gamma-1).
inline double bernoulli(const GasConstants& gas, double speed_sq, double c_sq) {
  return 0.5 * speed_sq + c_sq / (gas.gamma - 1.0);
}

// Entropy function A(s) = k0 exp(s/c_v); p = A(s) rho^gamma.
inline double entropy_function(const GasConstants& gas, double s) {
  return gas.k0 * std::exp(s / gas.c_v);
}

inline double entropy_from_A(const GasConstants& gas, double A) {
  if (!(A > 0.0)) throw std::domain_error("entropy_from_A: A must be positive");
  return gas.c_v * std::log(A / gas.k0);
}

inline double A_from_state(const GasConstants& gas, double p, double rho) {
  if (!(p > 0.0) || !(rho > 0.0))
    throw std::domain_error("A_from_state: p and rho must be positive");
  return p * std::pow(rho, -gas.gamma);
}

inline double rho_from_pA(const GasConstants& gas, double p, double A) {
  if (!(p > 0.0) || !(A > 0.0))
    throw std::domain_error("rho_from_pA: p and A must be positive");
  return std::pow(p / A, 1.0 / gas.gamma);
}

// Purely radial state used by the background profiles.
struct RadialState {
  double u = 0.0;    // radial velocity, outward positive
  double p = 0.0;
  double rho = 0.0;

  double c(const GasConstants& gas) const { return sound_speed(gas, p, rho); }
  double mach(const GasConstants& gas) const { return u / c(gas); }
  double E(const GasConstants& gas) const {
    const double cc = gas.gamma * p / rho;
    return bernoulli(gas, u * u, cc);
  }
  double A(const GasConstants& gas) const { return A_from_state(gas, p, rho); }
};

}  // namespace eulershell
