// Steady advection along the flow of V = u0 P + w across the shell.
//
// Two realizations of the same transport problem:
//  * trace_characteristics / pullback_initial integrate the characteristic
//    curves of dX/dr = w/(r u0) point by point and evaluate boundary data at
//    the foot points (literal method of characteristics);
//  * transport_scalar / transport_tangent march the whole angular grid
//    radially (RK4 substeps between Chebyshev nodes, spectral tangential
//    derivatives), which is what the solvers use.
// Both hold only while u0 is bounded away from zero, which the subsonic,
// supersonic and collar regions guarantee.
#pragma once

#include <array>
#include <memory>
#include <vector>

#include "eulershell/fields.hpp"

namespace eulershell {

// Foot point on the data sphere of the characteristic through each grid node.
struct CharacteristicMap {
  std::shared_ptr<const ShellGrid> grid;
  double r_data = 0.0;
  std::vector<double> theta, phi;  // nr * nsph entries
};

CharacteristicMap trace_characteristics(const ScalarField& u0,
                                        const TangentField& w, double r_data,
                                        int substeps = 4);

// Evaluate band-limited data at the foot points: the exact solution of the
// homogeneous transport problem.
ScalarField pullback_initial(const CharacteristicMap& map,
                             const SphCoeffs& data);

// Solve  u0 dq/dr + (w . s-grad q)/r + a q = f  with q = data on the sphere
// r_data, which must be one of the two radial boundaries. a and f may be
// null (treated as zero).
ScalarField transport_scalar(const ScalarField& u0, const TangentField& w,
                             const ScalarField* a, const ScalarField* f,
                             const std::vector<double>& data, double r_data,
                             int substeps = 8);

// Pointwise 3x3 reaction matrix for the tangent transport, row-major.
// The caller folds curvature couplings (terms proportional to P) into R so
// the right-hand side of the componentwise system is exactly
//   u0 dW_c/dr + (w . s-grad W_c)/r + sum_d R_cd W_d = F_c.
struct TangentReaction {
  std::array<ScalarField, 9> m;

  explicit TangentReaction(std::shared_ptr<const ShellGrid> g) {
    for (auto& f : m) f = ScalarField(g);
  }
};

TangentField transport_tangent(const ScalarField& u0, const TangentField& w,
                               const TangentReaction* R, const TangentField* F,
                               const SphereVec& data, double r_data,
                               int substeps = 8, bool reproject = true);

}  // namespace eulershell
