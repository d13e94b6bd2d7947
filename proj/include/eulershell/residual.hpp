// Pointwise residuals of the steady compressible Euler system on the shell.
//
// The shell metric is the flat R^3 metric in spherical coordinates, so all
// differential operators act on embedded Cartesian quantities: the velocity
// is V = u0 P + w (P the unit position vector, w tangent), and for a scalar F
//   grad F = P dF/dr + (surface gradient of F) / r,
// which is smooth across the poles. Residuals are evaluated spectrally and
// never reference how a candidate solution was produced.
#pragma once

#include <array>

#include "eulershell/fields.hpp"
#include "eulershell/gas.hpp"

namespace eulershell {

struct EulerResidual {
  ScalarField mass;     // div(rho V)
  ScalarField mom_r;    // P-component of div(rho V (x) V) + grad p
  TangentField mom_t;   // tangential part of the momentum residual
  ScalarField energy;   // div(rho E V)
  ScalarField entropy;  // V . grad A (entropy-function transport)
};

// Cartesian gradient of a scalar field (three component fields).
std::array<ScalarField, 3> cartesian_gradient(const ScalarField& f);

// Divergence of a Cartesian 3-vector field given as three scalars.
ScalarField cartesian_divergence(const ScalarField& vx, const ScalarField& vy,
                                 const ScalarField& vz);

EulerResidual euler_residual(const StateField& st);

// Shell-wide sup norms of the five residual components. max() is the single
// number drivers and convergence gates quote.
struct EulerResidualNorms {
  double mass = 0.0;
  double momentum_radial = 0.0;
  double momentum_tangent = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double max() const;
};

EulerResidualNorms euler_residual_norms(const StateField& st);

// Residual of the identity grad(|V|^2/2) - (V.grad)V = V x curl V, relative
// to the size of the competing terms. Analytically zero for any smooth field;
// a large value indicates an inconsistent velocity representation.
double vorticity_identity_gap(const StateField& st);

}  // namespace eulershell
