// Real spherical-harmonic analysis/synthesis on a Gauss-Legendre x uniform
// longitude grid, plus the tangent-field calculus built on top of it
// (surface gradient, divergence, curl, Hodge-type recovery from div/curl data).
//
// Basis: orthonormal real harmonics without the Condon-Shortley phase,
//   Y_{n,0}  = Q_{n,0},
//   Y_{n,m}  = sqrt(2) Q_{n,m} cos(m phi)   (m > 0),
//   Y_{n,-m} = sqrt(2) Q_{n,m} sin(m phi)   (m > 0),
// where Q_{n,m} is the L^2(S^2)-normalised associated Legendre function.
//
// Tangent fields are stored as three Cartesian component scalars (w_x, w_y,
// w_z) with w . P = 0 at every grid point, P being the unit position vector.
// That representation stays smooth across the poles, unlike (theta, phi)
// frame components.

#pragma once

#include <array>
#include <vector>

namespace eulershell {

class SphCoeffs {
 public:
  SphCoeffs() = default;
  explicit SphCoeffs(int lmax) : lmax_(lmax), c_((lmax + 1) * (lmax + 1), 0.0) {}

  int lmax() const { return lmax_; }
  std::size_t size() const { return c_.size(); }

  // m ranges over [-n, n]; storage index n^2 + n + m.
  double& operator()(int n, int m) { return c_[idx(n, m)]; }
  double operator()(int n, int m) const { return c_[idx(n, m)]; }

  double* data() { return c_.data(); }
  const double* data() const { return c_.data(); }

  // Multiply every degree-n coefficient by -n(n+1) (Laplace-Beltrami symbol).
  SphCoeffs laplace_beltrami() const;

 private:
  std::size_t idx(int n, int m) const;
  int lmax_ = -1;
  std::vector<double> c_;
};

// Colatitude x longitude collocation grid with precomputed Legendre tables.
class SphereGrid {
 public:
  SphereGrid(int lmax, int nlat = 0, int nlon = 0);

  int lmax() const { return lmax_; }
  int nlat() const { return nlat_; }
  int nlon() const { return nlon_; }
  std::size_t npoints() const {
    return static_cast<std::size_t>(nlat_) * nlon_;
  }

  double theta(int i) const { return theta_[i]; }
  double phi(int k) const { return phi_[k]; }
  double sin_theta(int i) const { return sin_theta_[i]; }
  double cos_theta(int i) const { return cos_theta_[i]; }
  // Quadrature weight of a single grid point (GL weight times 2 pi / nlon);
  // sum of point_weight over the grid is 4 pi.
  double point_weight(int i_lat) const { return wq_[i_lat]; }

  std::size_t index(int i_lat, int k_lon) const {
    return static_cast<std::size_t>(i_lat) * nlon_ + k_lon;
  }

  // Unit vectors of the spherical frame at grid point (i,k).
  std::array<double, 3> unit_radial(int i, int k) const;
  std::array<double, 3> unit_theta(int i, int k) const;
  std::array<double, 3> unit_phi(int i, int k) const;

  // Forward transform of point values (layout i_lat*nlon + k_lon).
  SphCoeffs analyze(const std::vector<double>& f) const;
  // Inverse transform onto the grid.
  std::vector<double> synthesize(const SphCoeffs& c) const;
  // Surface-gradient frame components on the grid:
  //   out_t = d f / d theta,  out_p = (1/sin theta) d f / d phi.
  void synth_gradient(const SphCoeffs& c, std::vector<double>& out_t,
                      std::vector<double>& out_p) const;

  // Integral over the sphere of a grid function (exact for the band limit).
  double integrate(const std::vector<double>& f) const;

  // normalised Legendre value Q_{n,m}(cos theta_i), m >= 0.
  double legendre(int i_lat, int n, int m) const;
  double legendre_dtheta(int i_lat, int n, int m) const;

 private:
  int lmax_, nlat_, nlon_;
  std::vector<double> theta_, phi_, sin_theta_, cos_theta_, wq_;
  std::size_t tab_stride_ = 0;
  std::vector<double> qtab_, dqtab_;  // per-latitude Legendre tables
  std::vector<double> cos_mphi_, sin_mphi_;  // (lmax+1) x nlon tables
};

// Point evaluation away from the grid (used at characteristic foot points).
double synth_point(const SphCoeffs& c, double theta, double phi);
// Value plus surface-gradient frame components at one point.  theta must be
// strictly inside (0, pi) for the gradient.
void synth_point_with_grad(const SphCoeffs& c, double theta, double phi,
                           double& value, double& df_dtheta,
                           double& df_dphi_over_sin);

// Tangent field on the sphere: three Cartesian component scalars per point.
struct SphereVec {
  std::vector<double> x, y, z;

  explicit SphereVec(std::size_t n = 0) : x(n, 0.0), y(n, 0.0), z(n, 0.0) {}
  std::size_t size() const { return x.size(); }
  std::array<double, 3> at(std::size_t i) const { return {x[i], y[i], z[i]}; }
  void set(std::size_t i, const std::array<double, 3>& v) {
    x[i] = v[0];
    y[i] = v[1];
    z[i] = v[2];
  }
};

// Surface gradient of a scalar as an embedded tangent field.
SphereVec surface_gradient(const SphereGrid& g, const SphCoeffs& c);

// Pointwise rotation by +90 degrees in the tangent plane: J w = P x w.
SphereVec rotate_tangent(const SphereGrid& g, const SphereVec& w);

// Surface divergence and curl (scalars on the grid).  Conventions:
//   s_div(surface_gradient(a)) = LB a,   s_curl(surface_gradient(a)) = 0,
//   s_div(J grad b) = 0,                 s_curl(J grad b) = LB b.
std::vector<double> surface_divergence(const SphereGrid& g, const SphereVec& w);
std::vector<double> surface_curl(const SphereGrid& g, const SphereVec& w);

// Recover w = grad(alpha) + J grad(beta) from target s_div and s_curl
// coefficient data.  The degree-0 coefficients of both targets must vanish
// within solvability_tol * (scale of the data); otherwise throws.
SphereVec div_curl_solve(const SphereGrid& g, const SphCoeffs& div_target,
                         const SphCoeffs& curl_target,
                         double solvability_tol = 1e-8);

// Project an arbitrary 3-vector field onto the tangent planes.
SphereVec project_tangent(const SphereGrid& g, const SphereVec& w);

}  // namespace eulershell
