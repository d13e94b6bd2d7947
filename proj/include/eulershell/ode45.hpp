// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) for small ODE systems.
//
// The integrator always lands exactly on requested output abscissae instead of
// interpolating between accepted steps. Downstream code differentiates
// profiles spectrally, so output values must be smooth samples of the true
// solution, not piecewise interpolants.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace eulershell {

struct Ode45Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double initial_step = 0.0;   // 0 => auto from interval
  double max_step = 0.0;       // 0 => |interval|
  std::size_t max_steps = 2000000;
};

// One adaptive integrator instance per system size N.
template <std::size_t N>
class Ode45 {
 public:
  using State = std::array<double, N>;
  // rhs(t, y, dy): writes dy/dt into dy. May throw to abort integration.
  using Rhs = std::function<void(double, const State&, State&)>;

  Ode45(Rhs rhs, Ode45Options opt = {}) : rhs_(std::move(rhs)), opt_(opt) {}

  // Integrate from (t0, y0) to t1 (either direction). Returns y(t1).
  State integrate(double t0, const State& y0, double t1) const {
    State y = y0;
    advance(t0, y, t1);
    return y;
  }

  // Integrate through a monotone sequence of abscissae, invoking
  // on_node(t, y) at every entry of ts (including ts.front() if it equals t0).
  void integrate_nodes(double t0, const State& y0,
                       const std::vector<double>& ts,
                       const std::function<void(double, const State&)>& on_node) const {
    State y = y0;
    double t = t0;
    for (double target : ts) {
      if (target != t) advance(t, y, target);
      t = target;
      on_node(t, y);
    }
  }

 private:
  // Advances y in place from t0 to t1; throws on step-count exhaustion.
  void advance(double t0, State& y, double t1) const {
    if (t1 == t0) return;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = (opt_.max_step > 0) ? opt_.max_step : span;
    double h = (opt_.initial_step > 0) ? opt_.initial_step
                                       : std::min(span, 1e-2 * span + 1e-8);
    h = std::min(h, hmax);
    double t = t0;
    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;
    rhs_(t, y, k1);
    for (std::size_t step = 0; step < opt_.max_steps; ++step) {
      if ((t1 - t) * dir <= 0.0) return;
      h = std::min(h, std::abs(t1 - t));
      const double hd = h * dir;

      stage(y, k1, 0.2, hd, ytmp);
      rhs_(t + 0.2 * hd, ytmp, k2);
      stage2(y, k1, 3.0 / 40.0, k2, 9.0 / 40.0, hd, ytmp);
      rhs_(t + 0.3 * hd, ytmp, k3);
      stage3(y, k1, 44.0 / 45.0, k2, -56.0 / 15.0, k3, 32.0 / 9.0, hd, ytmp);
      rhs_(t + 0.8 * hd, ytmp, k4);
      stage4(y, k1, 19372.0 / 6561.0, k2, -25360.0 / 2187.0, k3,
             64448.0 / 6561.0, k4, -212.0 / 729.0, hd, ytmp);
      rhs_(t + (8.0 / 9.0) * hd, ytmp, k5);
      stage5(y, k1, 9017.0 / 3168.0, k2, -355.0 / 33.0, k3, 46732.0 / 5247.0,
             k4, 49.0 / 176.0, k5, -5103.0 / 18656.0, hd, ytmp);
      rhs_(t + hd, ytmp, k6);
      for (std::size_t i = 0; i < N; ++i) {
        ynew[i] = y[i] + hd * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] +
                               125.0 / 192.0 * k4[i] - 2187.0 / 6784.0 * k5[i] +
                               11.0 / 84.0 * k6[i]);
      }
      rhs_(t + hd, ynew, k7);
      for (std::size_t i = 0; i < N; ++i) {
        yerr[i] = hd * (71.0 / 57600.0 * k1[i] - 71.0 / 16695.0 * k3[i] +
                        71.0 / 1920.0 * k4[i] - 17253.0 / 339200.0 * k5[i] +
                        22.0 / 525.0 * k6[i] - 1.0 / 40.0 * k7[i]);
      }
      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc =
            opt_.abs_tol +
            opt_.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double e = yerr[i] / sc;
        err += e * e;
      }
      err = std::sqrt(err / static_cast<double>(N));
      if (err <= 1.0) {
        t += hd;
        y = ynew;
        k1 = k7;  // first-same-as-last
      }
      const double fac =
          std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
      h = std::min(h * fac, hmax);
      if (!(h > 0.0) || !std::isfinite(err))
        throw std::runtime_error("ode45: step size collapsed");
    }
    throw std::runtime_error("ode45: max step count exceeded");
  }

  static void stage(const State& y, const State& k1, double a1, double hd,
                    State& out) {
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + hd * a1 * k1[i];
  }
  static void stage2(const State& y, const State& k1, double a1,
                     const State& k2, double a2, double hd, State& out) {
    for (std::size_t i = 0; i < N; ++i)
      out[i] = y[i] + hd * (a1 * k1[i] + a2 * k2[i]);
  }
  static void stage3(const State& y, const State& k1, double a1,
                     const State& k2, double a2, const State& k3, double a3,
                     double hd, State& out) {
    for (std::size_t i = 0; i < N; ++i)
      out[i] = y[i] + hd * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i]);
  }
  static void stage4(const State& y, const State& k1, double a1,
                     const State& k2, double a2, const State& k3, double a3,
                     const State& k4, double a4, double hd, State& out) {
    for (std::size_t i = 0; i < N; ++i)
      out[i] = y[i] + hd * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] + a4 * k4[i]);
  }
  static void stage5(const State& y, const State& k1, double a1,
                     const State& k2, double a2, const State& k3, double a3,
                     const State& k4, double a4, const State& k5, double a5,
                     double hd, State& out) {
    for (std::size_t i = 0; i < N; ++i)
      out[i] = y[i] + hd * (a1 * k1[i] + a2 * k2[i] + a3 * k3[i] +
                            a4 * k4[i] + a5 * k5[i]);
  }

  Rhs rhs_;
  Ode45Options opt_;
};

}  // namespace eulershell
