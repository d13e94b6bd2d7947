#include "eulershell/venttsel.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "eulershell/cheb.hpp"
#include "eulershell/coeffs.hpp"
#include "eulershell/errors.hpp"
#include "eulershell/threading.hpp"

namespace eulershell {

namespace {

double lam(int n) { return static_cast<double>(n) * (n + 1); }

}  // namespace

VenttselCoeffs venttsel_coeffs(const TransonicBackground& tb,
                               const MuConstants& mu) {
  if (!tb.subsonic)
    throw config_error("venttsel coefficients need a subsonic branch");
  VenttselCoeffs c;
  c.rb = tb.rb;
  c.r1 = tb.r1;
  c.mu7 = mu.mu7;
  c.mu9 = mu.mu9;

  const GasConstants gas = tb.gas;
  const std::shared_ptr<RadialProfile> prof = tb.subsonic;
  const double e4_scale = mu.mu4 / mu.mu2;

  c.e1 = [prof](double r) {
    const double m = prof->mach(r);
    return r * r * (m * m - 1.0);
  };
  c.e2 = [gas, prof](double r) {
    const double m = prof->mach(r);
    return 4.0 * r * coeff_b(gas.gamma, m * m);
  };
  c.e3 = [gas, prof](double r) {
    const double m = prof->mach(r);
    return coeff_e(gas.gamma, m * m);
  };
  c.e4 = [gas, prof, e4_scale](double r) {
    const double m = prof->mach(r);
    return e4_scale * std::pow(prof->rho(r), gas.gamma) *
           coeff_d2(gas.gamma, m * m);
  };
  c.e5 = [gas, prof](double r) {
    const double m = prof->mach(r);
    return -prof->rho(r) * coeff_d1(gas.gamma, m * m);
  };
  return c;
}

VenttselCoeffs venttsel_coeffs(const TransonicBackground& tb) {
  return venttsel_coeffs(tb, mu_constants(tb));
}

ModeOde venttsel_mode_ode(const VenttselCoeffs& c, int n) {
  ModeOde ode;
  ode.lo = c.rb;
  ode.hi = c.r1;
  const double l = lam(n);
  ode.p = [c](double r) { return c.e2(r) / c.e1(r); };
  ode.q = [c, l](double r) { return (c.e3(r) + l) / c.e1(r); };
  ode.rnl = [c](double r) { return -c.e4(r) / c.e1(r); };
  return ode;
}

double venttsel_theta(const VenttselCoeffs& c, int n) {
  return mode_theta(venttsel_mode_ode(c, n), (c.mu7 + lam(n)) / c.mu9);
}

SConditionReport check_s_condition(const VenttselCoeffs& c, int n_max,
                                   double rel_threshold) {
  if (n_max < 1) throw config_error("S-Condition scan needs n_max >= 1");
  SConditionReport rep;
  rep.n_requested = n_max;
  rep.theta.push_back(venttsel_theta(c, 0));
  rep.threshold = rel_threshold * std::max(1.0, std::abs(rep.theta[0]));

  int growth_streak = 0;
  for (int n = 1; n <= n_max; ++n) {
    const double th = venttsel_theta(c, n);
    growth_streak = (th > 1.0 && th > rep.theta.back()) ? growth_streak + 1 : 0;
    rep.theta.push_back(th);
    if (growth_streak >= 3) break;
  }

  rep.margin = std::abs(rep.theta[0]);
  for (int n = 0; n < static_cast<int>(rep.theta.size()); ++n) {
    const double a = std::abs(rep.theta[n]);
    rep.margin = std::min(rep.margin, a);
    if (a <= rep.threshold) rep.violations.push_back(n);
  }
  rep.holds = rep.violations.empty();
  return rep;
}

ScalarField venttsel_solve(const ScalarField& f, const std::vector<double>& h0,
                           const std::vector<double>& h1,
                           const VenttselCoeffs& c) {
  const std::shared_ptr<const ShellGrid> grid = f.grid;
  if (!grid) throw config_error("venttsel solve: interior datum has no grid");
  const SphereGrid& sph = grid->sphere();
  const double span = c.r1 - c.rb;
  if (std::abs(grid->r_lo() - c.rb) > 1e-10 * span ||
      std::abs(grid->r_hi() - c.r1) > 1e-10 * span)
    throw config_error("venttsel solve: grid does not span [r_b, r1]");
  if (h0.size() != sph.npoints() || h1.size() != sph.npoints())
    throw config_error("venttsel solve: boundary data size mismatch");

  const int nr = grid->nr();
  const int lmax = sph.lmax();

  // Data to mode space: one angular transform per radial level, then the
  // boundary spheres.
  std::vector<SphCoeffs> fc(nr);
  for (int ir = 0; ir < nr; ++ir) fc[ir] = sph.analyze(f.level(ir));
  const SphCoeffs h0c = sph.analyze(h0);
  const SphCoeffs h1c = sph.analyze(h1);

  std::vector<SphCoeffs> sol(nr, SphCoeffs(lmax));
  const std::size_t nmodes =
      static_cast<std::size_t>(lmax + 1) * (lmax + 1);

  // Modes are independent; each thread writes its own (n, m) slot of every
  // level, so the static partition is race-free.
  parallel_for(nmodes, [&](std::size_t k) {
    const int n =
        static_cast<int>(std::floor(std::sqrt(static_cast<double>(k) + 0.5)));
    const int m = static_cast<int>(k) - n * n - n;
    const double l = lam(n);
    const double h1nm = h1c(n, m);
    const double h0nm = h0c(n, m);

    std::vector<double> fcol(nr);
    for (int ir = 0; ir < nr; ++ir) fcol[ir] = fc[ir](n, m);

    ModeOde ode = venttsel_mode_ode(c, n);
    ode.lo = grid->r_lo();
    ode.hi = grid->r_hi();
    ode.f = [grid, fcol = std::move(fcol), c, l, h1nm](double r) {
      double fr = grid->interp_column(fcol, r);
      if (h1nm != 0.0) fr -= (l + c.e3(r) + c.e4(r)) * h1nm;
      return fr / c.e1(r);
    };

    const double a = (c.mu7 + l) / c.mu9;
    const double h = (h0nm - (l + c.mu7) * h1nm) / c.mu9;
    const ModeSolution ms = mode_bvp_solve(ode, n, a, h, 0.0, grid->radii());
    for (int ir = 0; ir < nr; ++ir) sol[ir](n, m) = ms.v[ir] + h1nm;
  });

  ScalarField p(grid);
  for (int ir = 0; ir < nr; ++ir) p.set_level(ir, sph.synthesize(sol[ir]));
  return p;
}

VenttselResidual venttsel_residual(const ScalarField& p, const ScalarField& f,
                                   const std::vector<double>& h0,
                                   const std::vector<double>& h1,
                                   const VenttselCoeffs& c) {
  const std::shared_ptr<const ShellGrid> grid = p.grid;
  const SphereGrid& sph = grid->sphere();
  const int nr = grid->nr();
  const std::size_t ns = grid->nsph();

  ScalarField dp(grid), d2p(grid);
  {
    std::vector<double> col(nr), d1c, d2c;
    for (std::size_t i = 0; i < ns; ++i) {
      for (int ir = 0; ir < nr; ++ir) col[ir] = p.at(ir, i);
      cheb_column_derivatives(col, grid->r_lo(), grid->r_hi(), d1c, &d2c);
      for (int ir = 0; ir < nr; ++ir) {
        dp.at(ir, i) = d1c[ir];
        d2p.at(ir, i) = d2c[ir];
      }
    }
  }
  const std::vector<double> trace = p.level(0);

  ScalarField res(grid);
  for (int ir = 0; ir < nr; ++ir) {
    const double r = grid->r(ir);
    const double e1 = c.e1(r), e2 = c.e2(r), e3 = c.e3(r), e4 = c.e4(r);
    const std::vector<double> lbp =
        sph.synthesize(sph.analyze(p.level(ir)).laplace_beltrami());
    for (std::size_t i = 0; i < ns; ++i) {
      const std::size_t idx = grid->index(ir, i);
      res.v[idx] = -lbp[i] + e1 * d2p.v[idx] + e2 * dp.v[idx] +
                   e3 * p.v[idx] + e4 * trace[i] - f.v[idx];
    }
  }

  VenttselResidual out;
  out.interior = shell_l2(res);

  const std::vector<double> lbt =
      sph.synthesize(sph.analyze(trace).laplace_beltrami());
  const std::vector<double> dtrace = dp.level(0);
  std::vector<double> row2(ns), dir2(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const double row =
        -lbt[i] + c.mu7 * trace[i] + c.mu9 * dtrace[i] - h0[i];
    row2[i] = row * row;
    const double dir = p.at(nr - 1, i) - h1[i];
    dir2[i] = dir * dir;
  }
  out.front_row = std::sqrt(sph.integrate(row2));
  out.dirichlet = std::sqrt(sph.integrate(dir2));
  return out;
}

}  // namespace eulershell
