// Shell collocation grid (Chebyshev radial x spherical harmonic angular) and
// the scalar / tangent-vector field containers used by every solver.
#pragma once

#include <memory>
#include <vector>

#include "eulershell/background.hpp"
#include "eulershell/sphere.hpp"

namespace eulershell {

class ShellGrid {
 public:
  ShellGrid(int n_r, double r_lo, double r_hi,
            std::shared_ptr<const SphereGrid> sphere);

  int nr() const { return static_cast<int>(r_.size()); }
  double r(int ir) const { return r_[ir]; }
  double r_lo() const { return r_.front(); }
  double r_hi() const { return r_.back(); }
  const std::vector<double>& radii() const { return r_; }
  const SphereGrid& sphere() const { return *sphere_; }
  std::shared_ptr<const SphereGrid> sphere_ptr() const { return sphere_; }

  std::size_t nsph() const { return sphere_->npoints(); }
  std::size_t size() const { return r_.size() * nsph(); }
  std::size_t index(int ir, std::size_t isph) const {
    return static_cast<std::size_t>(ir) * nsph() + isph;
  }

  // Clenshaw-Curtis weight of radial node ir (relative to dr, no r^2 factor).
  double radial_weight(int ir) const { return rw_[ir]; }
  // Differentiate a radial sample column (length nr) in place of out.
  void radial_derivative(const std::vector<double>& col,
                         std::vector<double>& out) const;
  const std::vector<double>& diff() const { return D_; }
  // Barycentric interpolation helpers along the radius.
  double interp_column(const std::vector<double>& col, double r) const;
  const std::vector<double>& bary() const { return bw_; }

 private:
  std::shared_ptr<const SphereGrid> sphere_;
  std::vector<double> r_, rw_, bw_, D_;
};

struct ScalarField {
  std::shared_ptr<const ShellGrid> grid;
  std::vector<double> v;  // layout: ir * nsph + isph

  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const ShellGrid> g, double fill = 0.0)
      : grid(std::move(g)), v(grid->size(), fill) {}

  double& at(int ir, std::size_t isph) { return v[grid->index(ir, isph)]; }
  double at(int ir, std::size_t isph) const {
    return v[grid->index(ir, isph)];
  }
  // View of one radial level as a sphere-sized vector copy.
  std::vector<double> level(int ir) const;
  void set_level(int ir, const std::vector<double>& sph);
};

// Tangent vector field: three Cartesian component scalars, w . P = 0.
struct TangentField {
  ScalarField x, y, z;

  TangentField() = default;
  explicit TangentField(std::shared_ptr<const ShellGrid> g)
      : x(g), y(g), z(g) {}

  const ShellGrid& grid() const { return *x.grid; }
  SphereVec level(int ir) const;
  void set_level(int ir, const SphereVec& w);
};

// Full flow state on a shell grid. Radial velocity u0 and the embedded
// tangential velocity w are primary; p, rho, E, A are scalars.
struct StateField {
  ScalarField p, rho, u0, E, A;
  TangentField w;

  StateField() = default;
  explicit StateField(std::shared_ptr<const ShellGrid> g)
      : p(g), rho(g), u0(g), E(g), A(g), w(g) {}
};

// Radial derivative of a scalar field (spectral along the Chebyshev nodes).
ScalarField radial_derivative(const ScalarField& f);

// Populate a state field with a spherically symmetric background profile.
StateField state_from_profile(std::shared_ptr<const ShellGrid> grid,
                              const RadialProfile& prof);

// Volume integral over the shell, measure r^2 dr dS.
double shell_integral(const ScalarField& f);
// L2 norm wrt the same measure, and the max norm.
double shell_l2(const ScalarField& f);
double shell_linf(const ScalarField& f);
double shell_linf(const TangentField& w);

}  // namespace eulershell
