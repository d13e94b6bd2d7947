#include "eulershell/residual.hpp"

#include <algorithm>
#include <cmath>

#include "eulershell/threading.hpp"

namespace eulershell {

std::array<ScalarField, 3> cartesian_gradient(const ScalarField& f) {
  const ShellGrid& g = *f.grid;
  const SphereGrid& sph = g.sphere();
  const ScalarField fr = radial_derivative(f);
  std::array<ScalarField, 3> out{ScalarField(f.grid), ScalarField(f.grid),
                                 ScalarField(f.grid)};
  parallel_for(static_cast<std::size_t>(g.nr()), [&](std::size_t ir) {
    const SphCoeffs c = sph.analyze(f.level(static_cast<int>(ir)));
    std::vector<double> gt, gp;
    sph.synth_gradient(c, gt, gp);
    const double inv_r = 1.0 / g.r(static_cast<int>(ir));
    for (int i = 0; i < sph.nlat(); ++i)
      for (int k = 0; k < sph.nlon(); ++k) {
        const std::size_t s = sph.index(i, k);
        const std::size_t t = g.index(static_cast<int>(ir), s);
        const auto P = sph.unit_radial(i, k);
        const auto et = sph.unit_theta(i, k);
        const auto ep = sph.unit_phi(i, k);
        for (int c3 = 0; c3 < 3; ++c3)
          out[c3].v[t] = P[c3] * fr.v[t] +
                         inv_r * (gt[s] * et[c3] + gp[s] * ep[c3]);
      }
  });
  return out;
}

ScalarField cartesian_divergence(const ScalarField& vx, const ScalarField& vy,
                                 const ScalarField& vz) {
  const auto gx = cartesian_gradient(vx);
  const auto gy = cartesian_gradient(vy);
  const auto gz = cartesian_gradient(vz);
  ScalarField div(vx.grid);
  for (std::size_t t = 0; t < div.v.size(); ++t)
    div.v[t] = gx[0].v[t] + gy[1].v[t] + gz[2].v[t];
  return div;
}

namespace {

// Assemble the Cartesian velocity components V = u0 P + w.
std::array<ScalarField, 3> velocity_components(const StateField& st) {
  const ShellGrid& g = *st.p.grid;
  const SphereGrid& sph = g.sphere();
  std::array<ScalarField, 3> V{ScalarField(st.p.grid), ScalarField(st.p.grid),
                               ScalarField(st.p.grid)};
  for (int ir = 0; ir < g.nr(); ++ir)
    for (int i = 0; i < sph.nlat(); ++i)
      for (int k = 0; k < sph.nlon(); ++k) {
        const std::size_t s = sph.index(i, k);
        const std::size_t t = g.index(ir, s);
        const auto P = sph.unit_radial(i, k);
        V[0].v[t] = st.u0.v[t] * P[0] + st.w.x.v[t];
        V[1].v[t] = st.u0.v[t] * P[1] + st.w.y.v[t];
        V[2].v[t] = st.u0.v[t] * P[2] + st.w.z.v[t];
      }
  return V;
}

}  // namespace

EulerResidual euler_residual(const StateField& st) {
  const ShellGrid& g = *st.p.grid;
  const SphereGrid& sph = g.sphere();
  const auto V = velocity_components(st);
  const auto dV0 = cartesian_gradient(V[0]);
  const auto dV1 = cartesian_gradient(V[1]);
  const auto dV2 = cartesian_gradient(V[2]);
  const auto dp = cartesian_gradient(st.p);
  const auto drho = cartesian_gradient(st.rho);
  const auto dE = cartesian_gradient(st.E);
  const auto dA = cartesian_gradient(st.A);

  EulerResidual res;
  res.mass = ScalarField(st.p.grid);
  res.mom_r = ScalarField(st.p.grid);
  res.mom_t = TangentField(st.p.grid);
  res.energy = ScalarField(st.p.grid);
  res.entropy = ScalarField(st.p.grid);

  for (int ir = 0; ir < g.nr(); ++ir)
    for (int i = 0; i < sph.nlat(); ++i)
      for (int k = 0; k < sph.nlon(); ++k) {
        const std::size_t s = sph.index(i, k);
        const std::size_t t = g.index(ir, s);
        const double vx = V[0].v[t], vy = V[1].v[t], vz = V[2].v[t];
        const double rho = st.rho.v[t];
        const double div_v = dV0[0].v[t] + dV1[1].v[t] + dV2[2].v[t];
        const double adv_rho =
            vx * drho[0].v[t] + vy * drho[1].v[t] + vz * drho[2].v[t];
        const double phi1 = adv_rho + rho * div_v;
        res.mass.v[t] = phi1;

        const double advVx =
            vx * dV0[0].v[t] + vy * dV0[1].v[t] + vz * dV0[2].v[t];
        const double advVy =
            vx * dV1[0].v[t] + vy * dV1[1].v[t] + vz * dV1[2].v[t];
        const double advVz =
            vx * dV2[0].v[t] + vy * dV2[1].v[t] + vz * dV2[2].v[t];
        const double phx = rho * advVx + dp[0].v[t] + phi1 * vx;
        const double phy = rho * advVy + dp[1].v[t] + phi1 * vy;
        const double phz = rho * advVz + dp[2].v[t] + phi1 * vz;
        const auto P = sph.unit_radial(i, k);
        const double phr = phx * P[0] + phy * P[1] + phz * P[2];
        res.mom_r.v[t] = phr;
        res.mom_t.x.v[t] = phx - phr * P[0];
        res.mom_t.y.v[t] = phy - phr * P[1];
        res.mom_t.z.v[t] = phz - phr * P[2];

        const double advE =
            vx * dE[0].v[t] + vy * dE[1].v[t] + vz * dE[2].v[t];
        res.energy.v[t] = rho * advE + st.E.v[t] * phi1;
        res.entropy.v[t] =
            vx * dA[0].v[t] + vy * dA[1].v[t] + vz * dA[2].v[t];
      }
  return res;
}

double EulerResidualNorms::max() const {
  return std::max({mass, momentum_radial, momentum_tangent, energy, entropy});
}

EulerResidualNorms euler_residual_norms(const StateField& st) {
  const EulerResidual r = euler_residual(st);
  EulerResidualNorms n;
  n.mass = shell_linf(r.mass);
  n.momentum_radial = shell_linf(r.mom_r);
  n.momentum_tangent = shell_linf(r.mom_t);
  n.energy = shell_linf(r.energy);
  n.entropy = shell_linf(r.entropy);
  return n;
}

double vorticity_identity_gap(const StateField& st) {
  const auto V = velocity_components(st);
  ScalarField kin(st.p.grid);
  for (std::size_t t = 0; t < kin.v.size(); ++t)
    kin.v[t] = 0.5 * (V[0].v[t] * V[0].v[t] + V[1].v[t] * V[1].v[t] +
                      V[2].v[t] * V[2].v[t]);
  const auto dK = cartesian_gradient(kin);
  const auto dV0 = cartesian_gradient(V[0]);
  const auto dV1 = cartesian_gradient(V[1]);
  const auto dV2 = cartesian_gradient(V[2]);

  double gap = 0.0, scale = 0.0;
  for (std::size_t t = 0; t < kin.v.size(); ++t) {
    const double vx = V[0].v[t], vy = V[1].v[t], vz = V[2].v[t];
    const double cx = dV2[1].v[t] - dV1[2].v[t];
    const double cy = dV0[2].v[t] - dV2[0].v[t];
    const double cz = dV1[0].v[t] - dV0[1].v[t];
    // Y = V x curl V
    const double yx = vy * cz - vz * cy;
    const double yy = vz * cx - vx * cz;
    const double yz = vx * cy - vy * cx;
    const double ax = vx * dV0[0].v[t] + vy * dV0[1].v[t] + vz * dV0[2].v[t];
    const double ay = vx * dV1[0].v[t] + vy * dV1[1].v[t] + vz * dV1[2].v[t];
    const double az = vx * dV2[0].v[t] + vy * dV2[1].v[t] + vz * dV2[2].v[t];
    const double zx = dK[0].v[t] - ax, zy = dK[1].v[t] - ay,
                 zz = dK[2].v[t] - az;
    gap = std::max({gap, std::abs(zx - yx), std::abs(zy - yy),
                    std::abs(zz - yz)});
    scale = std::max({scale, std::abs(dK[0].v[t]), std::abs(dK[1].v[t]),
                      std::abs(dK[2].v[t]), std::abs(ax), std::abs(ay),
                      std::abs(az), std::abs(yx), std::abs(yy), std::abs(yz)});
  }
  return gap / std::max(scale, 1e-300);
}

}  // namespace eulershell
