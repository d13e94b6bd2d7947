#include "eulershell/sphere.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_legendre.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eulershell/errors.hpp"

namespace eulershell {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

std::size_t gsl_tab_size(int lmax) {
  return gsl_sf_legendre_array_n(static_cast<std::size_t>(lmax));
}

std::size_t gsl_idx(int n, int m) {
  return gsl_sf_legendre_array_index(static_cast<std::size_t>(n),
                                     static_cast<std::size_t>(m));
}
}  // namespace

std::size_t SphCoeffs::idx(int n, int m) const {
  if (n < 0 || n > lmax_ || m < -n || m > n)
    throw config_error("harmonic index out of range");
  return static_cast<std::size_t>(n) * n + n + m;
}

SphCoeffs SphCoeffs::laplace_beltrami() const {
  SphCoeffs out(lmax_);
  for (int n = 0; n <= lmax_; ++n) {
    const double lam = -static_cast<double>(n) * (n + 1);
    for (int m = -n; m <= n; ++m) out(n, m) = lam * (*this)(n, m);
  }
  return out;
}

SphereGrid::SphereGrid(int lmax, int nlat, int nlon) : lmax_(lmax) {
  if (lmax < 0) throw config_error("grid band limit must be non-negative");
  nlat_ = nlat > 0 ? nlat : 3 * lmax / 2 + 2;
  nlon_ = nlon > 0 ? nlon : 3 * lmax + 3;
  if (nlat_ < lmax + 1)
    throw config_error("grid needs at least lmax+1 latitudes");
  if (nlon_ < 2 * lmax + 1)
    throw config_error("grid needs at least 2*lmax+1 longitudes");

  theta_.resize(nlat_);
  sin_theta_.resize(nlat_);
  cos_theta_.resize(nlat_);
  wq_.resize(nlat_);
  gsl_integration_glfixed_table* tbl =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nlat_));
  for (int i = 0; i < nlat_; ++i) {
    double xi, wi;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &xi,
                                  &wi, tbl);
    // GL abscissae ascend in x = cos(theta); store colatitudes ascending.
    const int j = nlat_ - 1 - i;
    theta_[j] = std::acos(xi);
    cos_theta_[j] = xi;
    sin_theta_[j] = std::sqrt(std::max(0.0, 1.0 - xi * xi));
    wq_[j] = wi * kTwoPi / nlon_;
  }
  gsl_integration_glfixed_table_free(tbl);

  phi_.resize(nlon_);
  for (int k = 0; k < nlon_; ++k) phi_[k] = kTwoPi * k / nlon_;

  tab_stride_ = gsl_tab_size(lmax_);
  qtab_.resize(tab_stride_ * nlat_);
  dqtab_.resize(tab_stride_ * nlat_);
  std::vector<double> dqdx(tab_stride_);
  for (int i = 0; i < nlat_; ++i) {
    double* q = qtab_.data() + tab_stride_ * i;
    gsl_sf_legendre_deriv_array_e(GSL_SF_LEGENDRE_SPHARM,
                                  static_cast<std::size_t>(lmax_),
                                  cos_theta_[i], 1.0, q, dqdx.data());
    double* dq = dqtab_.data() + tab_stride_ * i;
    for (std::size_t t = 0; t < tab_stride_; ++t)
      dq[t] = -sin_theta_[i] * dqdx[t];  // d/dtheta = -sin(theta) d/dx
  }

  cos_mphi_.resize(static_cast<std::size_t>(lmax_ + 1) * nlon_);
  sin_mphi_.resize(static_cast<std::size_t>(lmax_ + 1) * nlon_);
  for (int m = 0; m <= lmax_; ++m)
    for (int k = 0; k < nlon_; ++k) {
      cos_mphi_[static_cast<std::size_t>(m) * nlon_ + k] = std::cos(m * phi_[k]);
      sin_mphi_[static_cast<std::size_t>(m) * nlon_ + k] = std::sin(m * phi_[k]);
    }
}

double SphereGrid::legendre(int i_lat, int n, int m) const {
  return qtab_[tab_stride_ * i_lat + gsl_idx(n, m)];
}

double SphereGrid::legendre_dtheta(int i_lat, int n, int m) const {
  return dqtab_[tab_stride_ * i_lat + gsl_idx(n, m)];
}

std::array<double, 3> SphereGrid::unit_radial(int i, int k) const {
  return {sin_theta_[i] * cos_mphi_[nlon_ + k],
          sin_theta_[i] * sin_mphi_[nlon_ + k], cos_theta_[i]};
}

std::array<double, 3> SphereGrid::unit_theta(int i, int k) const {
  return {cos_theta_[i] * cos_mphi_[nlon_ + k],
          cos_theta_[i] * sin_mphi_[nlon_ + k], -sin_theta_[i]};
}

std::array<double, 3> SphereGrid::unit_phi(int i, int k) const {
  return {-sin_mphi_[nlon_ + k], cos_mphi_[nlon_ + k], 0.0};
}

SphCoeffs SphereGrid::analyze(const std::vector<double>& f) const {
  if (f.size() != npoints())
    throw config_error("field size does not match the grid");
  SphCoeffs c(lmax_);
  std::vector<double> fc(lmax_ + 1), fs(lmax_ + 1);
  for (int i = 0; i < nlat_; ++i) {
    const double* row = f.data() + index(i, 0);
    for (int m = 0; m <= lmax_; ++m) {
      const double* cm = cos_mphi_.data() + static_cast<std::size_t>(m) * nlon_;
      const double* sm = sin_mphi_.data() + static_cast<std::size_t>(m) * nlon_;
      double ac = 0.0, as = 0.0;
      for (int k = 0; k < nlon_; ++k) {
        ac += row[k] * cm[k];
        as += row[k] * sm[k];
      }
      fc[m] = ac;
      fs[m] = as;
    }
    const double w = wq_[i];
    const double* q = qtab_.data() + tab_stride_ * i;
    for (int n = 0; n <= lmax_; ++n) {
      c(n, 0) += w * q[gsl_idx(n, 0)] * fc[0];
      for (int m = 1; m <= n; ++m) {
        const double qv = w * kSqrt2 * q[gsl_idx(n, m)];
        c(n, m) += qv * fc[m];
        c(n, -m) += qv * fs[m];
      }
    }
  }
  return c;
}

std::vector<double> SphereGrid::synthesize(const SphCoeffs& c) const {
  if (c.lmax() != lmax_)
    throw config_error("coefficient band limit does not match the grid");
  std::vector<double> f(npoints(), 0.0);
  std::vector<double> A(lmax_ + 1), B(lmax_ + 1);
  for (int i = 0; i < nlat_; ++i) {
    const double* q = qtab_.data() + tab_stride_ * i;
    for (int m = 0; m <= lmax_; ++m) {
      double a = 0.0, b = 0.0;
      for (int n = std::max(m, 1); n <= lmax_; ++n) {
        a += q[gsl_idx(n, m)] * c(n, m);
        if (m > 0) b += q[gsl_idx(n, m)] * c(n, -m);
      }
      if (m == 0) a += q[gsl_idx(0, 0)] * c(0, 0);
      A[m] = a;
      B[m] = b;
    }
    double* row = f.data() + index(i, 0);
    for (int k = 0; k < nlon_; ++k) {
      double v = A[0];
      for (int m = 1; m <= lmax_; ++m)
        v += kSqrt2 *
             (A[m] * cos_mphi_[static_cast<std::size_t>(m) * nlon_ + k] +
              B[m] * sin_mphi_[static_cast<std::size_t>(m) * nlon_ + k]);
      row[k] = v;
    }
  }
  return f;
}

void SphereGrid::synth_gradient(const SphCoeffs& c, std::vector<double>& out_t,
                                std::vector<double>& out_p) const {
  if (c.lmax() != lmax_)
    throw config_error("coefficient band limit does not match the grid");
  out_t.assign(npoints(), 0.0);
  out_p.assign(npoints(), 0.0);
  std::vector<double> At(lmax_ + 1), Bt(lmax_ + 1), A(lmax_ + 1), B(lmax_ + 1);
  for (int i = 0; i < nlat_; ++i) {
    const double* q = qtab_.data() + tab_stride_ * i;
    const double* dq = dqtab_.data() + tab_stride_ * i;
    for (int m = 0; m <= lmax_; ++m) {
      double a = 0.0, b = 0.0, at = 0.0, bt = 0.0;
      for (int n = std::max(m, 1); n <= lmax_; ++n) {
        const std::size_t t = gsl_idx(n, m);
        a += q[t] * c(n, m);
        at += dq[t] * c(n, m);
        if (m > 0) {
          b += q[t] * c(n, -m);
          bt += dq[t] * c(n, -m);
        }
      }
      A[m] = a;
      B[m] = b;
      At[m] = at;
      Bt[m] = bt;
    }
    const double inv_sin = 1.0 / sin_theta_[i];
    double* rowt = out_t.data() + index(i, 0);
    double* rowp = out_p.data() + index(i, 0);
    for (int k = 0; k < nlon_; ++k) {
      double gt = At[0];
      double gp = 0.0;
      for (int m = 1; m <= lmax_; ++m) {
        const double cm = cos_mphi_[static_cast<std::size_t>(m) * nlon_ + k];
        const double sm = sin_mphi_[static_cast<std::size_t>(m) * nlon_ + k];
        gt += kSqrt2 * (At[m] * cm + Bt[m] * sm);
        gp += kSqrt2 * m * (-A[m] * sm + B[m] * cm);
      }
      rowt[k] = gt;
      rowp[k] = gp * inv_sin;
    }
  }
}

double SphereGrid::integrate(const std::vector<double>& f) const {
  if (f.size() != npoints())
    throw config_error("field size does not match the grid");
  double s = 0.0;
  for (int i = 0; i < nlat_; ++i) {
    double rowsum = 0.0;
    const double* row = f.data() + index(i, 0);
    for (int k = 0; k < nlon_; ++k) rowsum += row[k];
    s += wq_[i] * rowsum;
  }
  return s;
}

namespace {
// Reusable per-thread scratch for point evaluation.
thread_local std::vector<double> g_point_q, g_point_dq;
}  // namespace

double synth_point(const SphCoeffs& c, double theta, double phi) {
  const int lmax = c.lmax();
  const std::size_t need = gsl_tab_size(lmax);
  if (g_point_q.size() < need) g_point_q.resize(need);
  gsl_sf_legendre_array_e(GSL_SF_LEGENDRE_SPHARM,
                          static_cast<std::size_t>(lmax), std::cos(theta), 1.0,
                          g_point_q.data());
  double v = 0.0;
  for (int m = 0; m <= lmax; ++m) {
    double a = 0.0, b = 0.0;
    for (int n = std::max(m, 0); n <= lmax; ++n) {
      if (n < m) continue;
      const double qv = g_point_q[gsl_idx(n, m)];
      a += qv * c(n, m);
      if (m > 0) b += qv * c(n, -m);
    }
    if (m == 0)
      v += a;
    else
      v += kSqrt2 * (a * std::cos(m * phi) + b * std::sin(m * phi));
  }
  return v;
}

void synth_point_with_grad(const SphCoeffs& c, double theta, double phi,
                           double& value, double& df_dtheta,
                           double& df_dphi_over_sin) {
  const int lmax = c.lmax();
  const std::size_t need = gsl_tab_size(lmax);
  if (g_point_q.size() < need) g_point_q.resize(need);
  if (g_point_dq.size() < need) g_point_dq.resize(need);
  const double x = std::cos(theta);
  const double sth = std::sin(theta);
  gsl_sf_legendre_deriv_array_e(GSL_SF_LEGENDRE_SPHARM,
                                static_cast<std::size_t>(lmax), x, 1.0,
                                g_point_q.data(), g_point_dq.data());
  value = 0.0;
  df_dtheta = 0.0;
  double dphi = 0.0;
  for (int m = 0; m <= lmax; ++m) {
    double a = 0.0, b = 0.0, at = 0.0, bt = 0.0;
    for (int n = std::max(m, 0); n <= lmax; ++n) {
      if (n < m) continue;
      const std::size_t t = gsl_idx(n, m);
      const double qv = g_point_q[t];
      const double dqv = -sth * g_point_dq[t];
      a += qv * c(n, m);
      at += dqv * c(n, m);
      if (m > 0) {
        b += qv * c(n, -m);
        bt += dqv * c(n, -m);
      }
    }
    if (m == 0) {
      value += a;
      df_dtheta += at;
    } else {
      const double cm = std::cos(m * phi), sm = std::sin(m * phi);
      value += kSqrt2 * (a * cm + b * sm);
      df_dtheta += kSqrt2 * (at * cm + bt * sm);
      dphi += kSqrt2 * m * (-a * sm + b * cm);
    }
  }
  df_dphi_over_sin = dphi / sth;
}

SphereVec surface_gradient(const SphereGrid& g, const SphCoeffs& c) {
  std::vector<double> gt, gp;
  g.synth_gradient(c, gt, gp);
  SphereVec w(g.npoints());
  for (int i = 0; i < g.nlat(); ++i)
    for (int k = 0; k < g.nlon(); ++k) {
      const std::size_t s = g.index(i, k);
      const auto et = g.unit_theta(i, k);
      const auto ep = g.unit_phi(i, k);
      w.x[s] = gt[s] * et[0] + gp[s] * ep[0];
      w.y[s] = gt[s] * et[1] + gp[s] * ep[1];
      w.z[s] = gt[s] * et[2] + gp[s] * ep[2];
    }
  return w;
}

SphereVec rotate_tangent(const SphereGrid& g, const SphereVec& w) {
  SphereVec out(g.npoints());
  for (int i = 0; i < g.nlat(); ++i)
    for (int k = 0; k < g.nlon(); ++k) {
      const std::size_t s = g.index(i, k);
      const auto P = g.unit_radial(i, k);
      out.x[s] = P[1] * w.z[s] - P[2] * w.y[s];
      out.y[s] = P[2] * w.x[s] - P[0] * w.z[s];
      out.z[s] = P[0] * w.y[s] - P[1] * w.x[s];
    }
  return out;
}

std::vector<double> surface_divergence(const SphereGrid& g,
                                       const SphereVec& w) {
  // div W = sum_c  e_c . surface_gradient(W_c): differentiating the Cartesian
  // component scalars keeps everything smooth at the poles.
  std::vector<double> div(g.npoints(), 0.0);
  std::vector<double> gt, gp;
  const std::vector<double>* comp[3] = {&w.x, &w.y, &w.z};
  for (int c3 = 0; c3 < 3; ++c3) {
    const SphCoeffs cc = g.analyze(*comp[c3]);
    g.synth_gradient(cc, gt, gp);
    for (int i = 0; i < g.nlat(); ++i)
      for (int k = 0; k < g.nlon(); ++k) {
        const std::size_t s = g.index(i, k);
        const auto et = g.unit_theta(i, k);
        const auto ep = g.unit_phi(i, k);
        div[s] += gt[s] * et[c3] + gp[s] * ep[c3];
      }
  }
  return div;
}

std::vector<double> surface_curl(const SphereGrid& g, const SphereVec& w) {
  std::vector<double> c = surface_divergence(g, rotate_tangent(g, w));
  for (double& v : c) v = -v;
  return c;
}

SphereVec div_curl_solve(const SphereGrid& g, const SphCoeffs& div_target,
                         const SphCoeffs& curl_target, double solvability_tol) {
  if (div_target.lmax() != g.lmax() || curl_target.lmax() != g.lmax())
    throw config_error("coefficient band limit does not match the grid");
  double scale = 0.0;
  for (std::size_t t = 0; t < div_target.size(); ++t)
    scale = std::max({scale, std::abs(div_target.data()[t]),
                      std::abs(curl_target.data()[t])});
  const double tol = solvability_tol * std::max(scale, 1e-300);
  if (std::abs(div_target(0, 0)) > tol || std::abs(curl_target(0, 0)) > tol)
    throw numerical_error(
        "div/curl data has a nonzero mean: no tangent field matches it");

  SphCoeffs alpha(g.lmax()), beta(g.lmax());
  for (int n = 1; n <= g.lmax(); ++n) {
    const double lam = -static_cast<double>(n) * (n + 1);
    for (int m = -n; m <= n; ++m) {
      alpha(n, m) = div_target(n, m) / lam;
      beta(n, m) = curl_target(n, m) / lam;
    }
  }
  const SphereVec ga = surface_gradient(g, alpha);
  const SphereVec gb = rotate_tangent(g, surface_gradient(g, beta));
  SphereVec w(g.npoints());
  for (std::size_t s = 0; s < g.npoints(); ++s) {
    w.x[s] = ga.x[s] + gb.x[s];
    w.y[s] = ga.y[s] + gb.y[s];
    w.z[s] = ga.z[s] + gb.z[s];
  }
  return w;
}

SphereVec project_tangent(const SphereGrid& g, const SphereVec& w) {
  SphereVec out(g.npoints());
  for (int i = 0; i < g.nlat(); ++i)
    for (int k = 0; k < g.nlon(); ++k) {
      const std::size_t s = g.index(i, k);
      const auto P = g.unit_radial(i, k);
      const double dot = P[0] * w.x[s] + P[1] * w.y[s] + P[2] * w.z[s];
      out.x[s] = w.x[s] - dot * P[0];
      out.y[s] = w.y[s] - dot * P[1];
      out.z[s] = w.z[s] - dot * P[2];
    }
  return out;
}

}  // namespace eulershell
