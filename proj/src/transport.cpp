#include "eulershell/transport.hpp"

#include <cmath>

#include "eulershell/errors.hpp"
#include "eulershell/threading.hpp"

namespace eulershell {

namespace {

constexpr double kMinRadialSpeed = 1e-10;

// Barycentric interpolation weights at radius r, shared by every column of a
// field. Handles exact node hits.
class LevelInterp {
 public:
  LevelInterp(const ShellGrid& g, double r) : g_(&g) {
    const auto& x = g.radii();
    const auto& bw = g.bary();
    const int nr = g.nr();
    wn_.assign(nr, 0.0);
    double sum = 0.0;
    for (int j = 0; j < nr; ++j) {
      const double d = r - x[j];
      if (std::abs(d) < 1e-14 * (std::abs(r) + 1.0)) {
        exact_ = j;
        return;
      }
      wn_[j] = bw[j] / d;
      sum += wn_[j];
    }
    for (double& v : wn_) v /= sum;
  }

  void eval(const ScalarField& f, std::vector<double>& out) const {
    const std::size_t ns = g_->nsph();
    out.assign(ns, 0.0);
    if (exact_ >= 0) {
      const double* src = f.v.data() + g_->index(exact_, 0);
      std::copy(src, src + ns, out.begin());
      return;
    }
    for (int j = 0; j < g_->nr(); ++j) {
      const double wj = wn_[j];
      if (wj == 0.0) continue;
      const double* src = f.v.data() + g_->index(j, 0);
      for (std::size_t s = 0; s < ns; ++s) out[s] += wj * src[s];
    }
  }

  void eval(const TangentField& f, SphereVec& out) const {
    eval(f.x, out.x);
    eval(f.y, out.y);
    eval(f.z, out.z);
  }

 private:
  const ShellGrid* g_;
  int exact_ = -1;
  std::vector<double> wn_;
};

enum class March { Up, Down };

March direction_for(const ShellGrid& g, double r_data) {
  const double scale = g.r_hi() - g.r_lo();
  if (std::abs(r_data - g.r_lo()) < 1e-10 * scale) return March::Up;
  if (std::abs(r_data - g.r_hi()) < 1e-10 * scale) return March::Down;
  throw config_error("transport data must sit on a radial boundary sphere");
}

// Advection term (w . s-grad q)/r on one angular level.
void advection(const SphereGrid& sph, double r, const SphereVec& wv,
               const std::vector<double>& q, std::vector<double>& adv,
               std::vector<double>& gt, std::vector<double>& gp) {
  const SphCoeffs c = sph.analyze(q);
  sph.synth_gradient(c, gt, gp);
  adv.resize(q.size());
  for (int i = 0; i < sph.nlat(); ++i)
    for (int k = 0; k < sph.nlon(); ++k) {
      const std::size_t s = sph.index(i, k);
      const auto et = sph.unit_theta(i, k);
      const auto ep = sph.unit_phi(i, k);
      const double wt =
          wv.x[s] * et[0] + wv.y[s] * et[1] + wv.z[s] * et[2];
      const double wp =
          wv.x[s] * ep[0] + wv.y[s] * ep[1] + wv.z[s] * ep[2];
      adv[s] = (wt * gt[s] + wp * gp[s]) / r;
    }
}

}  // namespace

ScalarField transport_scalar(const ScalarField& u0, const TangentField& w,
                             const ScalarField* a, const ScalarField* f,
                             const std::vector<double>& data, double r_data,
                             int substeps) {
  const ShellGrid& g = *u0.grid;
  const SphereGrid& sph = g.sphere();
  if (data.size() != g.nsph())
    throw config_error("transport data size does not match the sphere grid");
  const March dir = direction_for(g, r_data);
  ScalarField out(u0.grid);

  std::vector<double> q = data;
  std::vector<double> dq, k1, k2, k3, k4, qt, gt, gp;
  std::vector<double> u0v, av, fv;
  SphereVec wv(g.nsph());

  auto rhs = [&](double r, const std::vector<double>& qq,
                 std::vector<double>& dd) {
    const LevelInterp li(g, r);
    li.eval(u0, u0v);
    li.eval(w, wv);
    if (a) li.eval(*a, av);
    if (f) li.eval(*f, fv);
    advection(sph, r, wv, qq, dd, gt, gp);
    for (std::size_t s = 0; s < qq.size(); ++s) {
      const double rad = u0v[s];
      if (std::abs(rad) < kMinRadialSpeed)
        throw numerical_error("transport reached a radial stagnation point");
      double val = -dd[s];
      if (a) val -= av[s] * qq[s];
      if (f) val += fv[s];
      dd[s] = val / rad;
    }
  };

  const int nr = g.nr();
  const int start = (dir == March::Up) ? 0 : nr - 1;
  const int stop = (dir == March::Up) ? nr - 1 : 0;
  const int step = (dir == March::Up) ? 1 : -1;
  out.set_level(start, q);
  for (int j = start; j != stop; j += step) {
    const double ra = g.r(j), rb = g.r(j + step);
    const double h = (rb - ra) / substeps;
    double r = ra;
    for (int ss = 0; ss < substeps; ++ss) {
      rhs(r, q, k1);
      qt.resize(q.size());
      for (std::size_t s = 0; s < q.size(); ++s)
        qt[s] = q[s] + 0.5 * h * k1[s];
      rhs(r + 0.5 * h, qt, k2);
      for (std::size_t s = 0; s < q.size(); ++s)
        qt[s] = q[s] + 0.5 * h * k2[s];
      rhs(r + 0.5 * h, qt, k3);
      for (std::size_t s = 0; s < q.size(); ++s) qt[s] = q[s] + h * k3[s];
      const double rn = (ss == substeps - 1) ? rb : r + h;
      rhs(rn, qt, k4);
      for (std::size_t s = 0; s < q.size(); ++s)
        q[s] += h / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
      r = rn;
    }
    out.set_level(j + step, q);
  }
  return out;
}

TangentField transport_tangent(const ScalarField& u0, const TangentField& w,
                               const TangentReaction* R, const TangentField* F,
                               const SphereVec& data, double r_data,
                               int substeps, bool reproject) {
  const ShellGrid& g = *u0.grid;
  const SphereGrid& sph = g.sphere();
  if (data.size() != g.nsph())
    throw config_error("transport data size does not match the sphere grid");
  const March dir = direction_for(g, r_data);
  TangentField out(u0.grid);

  using Vec3 = std::array<std::vector<double>, 3>;
  Vec3 q{data.x, data.y, data.z};
  std::vector<double> u0v, gt, gp;
  SphereVec wv(g.nsph());
  std::array<std::vector<double>, 9> Rv;
  Vec3 Fv;

  auto rhs = [&](double r, const Vec3& qq, Vec3& dd) {
    const LevelInterp li(g, r);
    li.eval(u0, u0v);
    li.eval(w, wv);
    if (R)
      for (int e = 0; e < 9; ++e) li.eval(R->m[e], Rv[e]);
    if (F) {
      li.eval(F->x, Fv[0]);
      li.eval(F->y, Fv[1]);
      li.eval(F->z, Fv[2]);
    }
    for (int c = 0; c < 3; ++c) advection(sph, r, wv, qq[c], dd[c], gt, gp);
    for (std::size_t s = 0; s < qq[0].size(); ++s) {
      const double rad = u0v[s];
      if (std::abs(rad) < kMinRadialSpeed)
        throw numerical_error("transport reached a radial stagnation point");
      for (int c = 0; c < 3; ++c) {
        double val = -dd[c][s];
        if (R)
          val -= Rv[3 * c][s] * qq[0][s] + Rv[3 * c + 1][s] * qq[1][s] +
                 Rv[3 * c + 2][s] * qq[2][s];
        if (F) val += Fv[c][s];
        dd[c][s] = val / rad;
      }
    }
  };

  auto project = [&](Vec3& qq) {
    for (int i = 0; i < sph.nlat(); ++i)
      for (int k = 0; k < sph.nlon(); ++k) {
        const std::size_t s = sph.index(i, k);
        const auto P = sph.unit_radial(i, k);
        const double dot =
            P[0] * qq[0][s] + P[1] * qq[1][s] + P[2] * qq[2][s];
        for (int c = 0; c < 3; ++c) qq[c][s] -= dot * P[c];
      }
  };

  auto store = [&](int level, const Vec3& qq) {
    SphereVec sv(g.nsph());
    sv.x = qq[0];
    sv.y = qq[1];
    sv.z = qq[2];
    out.set_level(level, sv);
  };

  const int nr = g.nr();
  const int start = (dir == March::Up) ? 0 : nr - 1;
  const int stop = (dir == March::Up) ? nr - 1 : 0;
  const int step = (dir == March::Up) ? 1 : -1;
  store(start, q);
  Vec3 k1, k2, k3, k4, qt;
  for (int j = start; j != stop; j += step) {
    const double ra = g.r(j), rb = g.r(j + step);
    const double h = (rb - ra) / substeps;
    double r = ra;
    for (int ss = 0; ss < substeps; ++ss) {
      rhs(r, q, k1);
      for (int c = 0; c < 3; ++c) {
        qt[c].resize(q[c].size());
        for (std::size_t s = 0; s < q[c].size(); ++s)
          qt[c][s] = q[c][s] + 0.5 * h * k1[c][s];
      }
      rhs(r + 0.5 * h, qt, k2);
      for (int c = 0; c < 3; ++c)
        for (std::size_t s = 0; s < q[c].size(); ++s)
          qt[c][s] = q[c][s] + 0.5 * h * k2[c][s];
      rhs(r + 0.5 * h, qt, k3);
      for (int c = 0; c < 3; ++c)
        for (std::size_t s = 0; s < q[c].size(); ++s)
          qt[c][s] = q[c][s] + h * k3[c][s];
      const double rn = (ss == substeps - 1) ? rb : r + h;
      rhs(rn, qt, k4);
      for (int c = 0; c < 3; ++c)
        for (std::size_t s = 0; s < q[c].size(); ++s)
          q[c][s] += h / 6.0 *
                     (k1[c][s] + 2.0 * k2[c][s] + 2.0 * k3[c][s] + k4[c][s]);
      if (reproject) project(q);
      r = rn;
    }
    store(j + step, q);
  }
  return out;
}

CharacteristicMap trace_characteristics(const ScalarField& u0,
                                        const TangentField& w, double r_data,
                                        int substeps) {
  const ShellGrid& g = *u0.grid;
  const SphereGrid& sph = g.sphere();
  const March dir = direction_for(g, r_data);
  const int nr = g.nr();
  const std::size_t ns = g.nsph();

  CharacteristicMap map;
  map.grid = u0.grid;
  map.r_data = r_data;
  map.theta.resize(g.size());
  map.phi.resize(g.size());

  // Angular coefficient tables at each radial node, interpolated radially
  // inside the RHS.
  std::vector<SphCoeffs> cu(nr), cwx(nr), cwy(nr), cwz(nr);
  for (int j = 0; j < nr; ++j) {
    cu[j] = sph.analyze(u0.level(j));
    cwx[j] = sph.analyze(w.x.level(j));
    cwy[j] = sph.analyze(w.y.level(j));
    cwz[j] = sph.analyze(w.z.level(j));
  }
  const int lm = sph.lmax();
  auto interp_coeffs = [&](const std::vector<SphCoeffs>& tab, double r,
                           SphCoeffs& out) {
    std::vector<double> col(nr);
    out = SphCoeffs(lm);
    for (std::size_t t = 0; t < out.size(); ++t) {
      for (int j = 0; j < nr; ++j) col[j] = tab[j].data()[t];
      out.data()[t] = g.interp_column(col, r);
    }
  };

  parallel_for(static_cast<std::size_t>(nr), [&](std::size_t irz) {
    const int ir = static_cast<int>(irz);
    // Trajectories of every angular node on this level, as unit 3-vectors.
    std::vector<std::array<double, 3>> X(ns);
    for (int i = 0; i < sph.nlat(); ++i)
      for (int k = 0; k < sph.nlon(); ++k)
        X[sph.index(i, k)] = sph.unit_radial(i, k);

    SphCoeffs cur_u(lm), cur_wx(lm), cur_wy(lm), cur_wz(lm);
    auto rhs = [&](double r, const std::vector<std::array<double, 3>>& pos,
                   std::vector<std::array<double, 3>>& der) {
      interp_coeffs(cu, r, cur_u);
      interp_coeffs(cwx, r, cur_wx);
      interp_coeffs(cwy, r, cur_wy);
      interp_coeffs(cwz, r, cur_wz);
      der.resize(pos.size());
      for (std::size_t s = 0; s < pos.size(); ++s) {
        const auto& Xp = pos[s];
        const double th = std::acos(std::clamp(Xp[2], -1.0, 1.0));
        const double ph = std::atan2(Xp[1], Xp[0]);
        const double ur = synth_point(cur_u, th, ph);
        if (std::abs(ur) < kMinRadialSpeed)
          throw numerical_error("characteristic hit a radial stagnation point");
        std::array<double, 3> wp{synth_point(cur_wx, th, ph),
                                 synth_point(cur_wy, th, ph),
                                 synth_point(cur_wz, th, ph)};
        // Keep the step tangent to the sphere.
        const double dot = wp[0] * Xp[0] + wp[1] * Xp[1] + wp[2] * Xp[2];
        for (int c = 0; c < 3; ++c)
          der[s][c] = (wp[c] - dot * Xp[c]) / (r * ur);
      }
    };

    // March from this level to the data sphere through the node intervals.
    const int dstep = (dir == March::Up) ? -1 : 1;
    std::vector<std::array<double, 3>> k1, k2, k3, k4, xt;
    for (int j = ir; j != ((dir == March::Up) ? 0 : nr - 1); j += dstep) {
      const double ra = g.r(j), rb = g.r(j + dstep);
      const double h = (rb - ra) / substeps;
      double r = ra;
      for (int ss = 0; ss < substeps; ++ss) {
        rhs(r, X, k1);
        xt.resize(ns);
        for (std::size_t s = 0; s < ns; ++s)
          for (int c = 0; c < 3; ++c)
            xt[s][c] = X[s][c] + 0.5 * h * k1[s][c];
        rhs(r + 0.5 * h, xt, k2);
        for (std::size_t s = 0; s < ns; ++s)
          for (int c = 0; c < 3; ++c)
            xt[s][c] = X[s][c] + 0.5 * h * k2[s][c];
        rhs(r + 0.5 * h, xt, k3);
        for (std::size_t s = 0; s < ns; ++s)
          for (int c = 0; c < 3; ++c) xt[s][c] = X[s][c] + h * k3[s][c];
        const double rn = (ss == substeps - 1) ? rb : r + h;
        rhs(rn, xt, k4);
        for (std::size_t s = 0; s < ns; ++s) {
          double norm2 = 0.0;
          for (int c = 0; c < 3; ++c) {
            X[s][c] += h / 6.0 *
                       (k1[s][c] + 2.0 * k2[s][c] + 2.0 * k3[s][c] + k4[s][c]);
            norm2 += X[s][c] * X[s][c];
          }
          const double inv = 1.0 / std::sqrt(norm2);
          for (int c = 0; c < 3; ++c) X[s][c] *= inv;
        }
        r = rn;
      }
    }
    for (std::size_t s = 0; s < ns; ++s) {
      map.theta[g.index(ir, s)] = std::acos(std::clamp(X[s][2], -1.0, 1.0));
      map.phi[g.index(ir, s)] = std::atan2(X[s][1], X[s][0]);
    }
  });
  return map;
}

ScalarField pullback_initial(const CharacteristicMap& map,
                             const SphCoeffs& data) {
  ScalarField out(map.grid);
  parallel_for(out.v.size(), [&](std::size_t t) {
    out.v[t] = synth_point(data, map.theta[t], map.phi[t]);
  });
  return out;
}

}  // namespace eulershell
