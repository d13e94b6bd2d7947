// Chebyshev-Lobatto collocation utilities: nodes, barycentric interpolation,
// differentiation matrices, Clenshaw-Curtis quadrature weights.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace eulershell {

// n Chebyshev-Lobatto nodes on [a,b], ascending (node 0 = a, node n-1 = b).
std::vector<double> cheb_nodes(std::size_t n, double a, double b);

// Barycentric weights for the Chebyshev-Lobatto nodes above (ascending order).
std::vector<double> cheb_bary_weights(std::size_t n);

// Barycentric weights for an arbitrary node set (O(n^2), scaled to unit max).
std::vector<double> bary_weights(const std::vector<double>& x);

// Barycentric interpolation of (x, w, f) at xq. Exact at nodes.
double bary_eval(const std::vector<double>& x, const std::vector<double>& w,
                 const std::vector<double>& f, double xq);

// Dense differentiation matrix (row-major n*n) for nodes x with weights w.
// Diagonal via the negative-sum trick.
std::vector<double> diff_matrix(const std::vector<double>& x,
                                const std::vector<double>& w);

// Clenshaw-Curtis quadrature weights for n Chebyshev-Lobatto nodes on [a,b],
// ascending node order; exact for polynomials of degree <= n-1.
std::vector<double> clenshaw_curtis_weights(std::size_t n, double a, double b);

// y = D * f for a dense row-major matrix.
void apply_matrix(const std::vector<double>& D, const std::vector<double>& f,
                  std::vector<double>& out);

// Chebyshev series of Lobatto samples in the ascending node order above
// (T_k at node j is (-1)^k cos(pi j k / (n-1))), by direct O(n^2) sums;
// cheb_synthesize inverts it on the same nodes.  cheb_diff_coeffs maps the
// series of a function on [lo, hi] to the series of its derivative by the
// backward recurrence.  The coefficient route matters when differentiating
// twice: the dense matrix amplifies eps-level sample noise by ~n^4 near the
// interval ends, the recurrence only by ~n^2.
std::vector<double> cheb_analyze(const std::vector<double>& f);
std::vector<double> cheb_synthesize(const std::vector<double>& a);
std::vector<double> cheb_diff_coeffs(const std::vector<double>& a, double lo,
                                     double hi);

// First (and optionally second) derivative of one sampled column through its
// Chebyshev series, with coefficients at the double-precision noise floor
// zeroed first.  Pass nullptr for d2 when only the first derivative is
// wanted.  This is the route solvers use whenever a candidate field gets
// differentiated twice.
void cheb_column_derivatives(const std::vector<double>& col, double lo,
                             double hi, std::vector<double>& d1,
                             std::vector<double>* d2);

}  // namespace eulershell
