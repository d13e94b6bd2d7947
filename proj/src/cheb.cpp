#include "eulershell/cheb.hpp"

#include <algorithm>
#include <numbers>

namespace eulershell {

std::vector<double> cheb_nodes(std::size_t n, double a, double b) {
  if (n < 2) throw std::invalid_argument("cheb_nodes: need n >= 2");
  std::vector<double> x(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t j = 0; j < n; ++j) {
    // cos runs 1 -> -1; subtracting puts node 0 at a.
    x[j] = c - h * std::cos(std::numbers::pi * static_cast<double>(j) /
                            static_cast<double>(n - 1));
  }
  x.front() = a;
  x.back() = b;
  return x;
}

std::vector<double> cheb_bary_weights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = (j % 2 == 0) ? 1.0 : -1.0;
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

std::vector<double> bary_weights(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) w[j] /= (x[j] - x[k]);
    }
  }
  double m = 0.0;
  for (double v : w) m = std::max(m, std::abs(v));
  for (double& v : w) v /= m;
  return w;
}

double bary_eval(const std::vector<double>& x, const std::vector<double>& w,
                 const std::vector<double>& f, double xq) {
  double num = 0.0, den = 0.0;
  const std::size_t n = x.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double d = xq - x[j];
    if (d == 0.0) return f[j];
    const double t = w[j] / d;
    num += t * f[j];
    den += t;
  }
  return num / den;
}

std::vector<double> diff_matrix(const std::vector<double>& x,
                                const std::vector<double>& w) {
  const std::size_t n = x.size();
  std::vector<double> D(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (w[j] / w[i]) / (x[i] - x[j]);
      D[i * n + j] = d;
      rowsum += d;
    }
    D[i * n + i] = -rowsum;
  }
  return D;
}

std::vector<double> clenshaw_curtis_weights(std::size_t n, double a, double b) {
  if (n < 2) throw std::invalid_argument("clenshaw_curtis_weights: n >= 2");
  const std::size_t N = n - 1;
  std::vector<double> w(n, 0.0);
  // Interior weights: w_j = (4/N) * sum''_{k even} cos(k j pi / N)/(1 - k^2),
  // the double prime halving the k = 0 and (N even) k = N terms.
  for (std::size_t j = 1; j < N; ++j) {
    double s = 0.5;  // k = 0 term halved
    for (std::size_t k = 2; k <= N; k += 2) {
      const double term = std::cos(static_cast<double>(k * j) *
                                   std::numbers::pi / static_cast<double>(N)) /
                          (1.0 - static_cast<double>(k) * static_cast<double>(k));
      s += (k == N) ? 0.5 * term : term;
    }
    w[j] = 4.0 * s / static_cast<double>(N);
  }
  const double nd = static_cast<double>(N);
  const double wend = (N % 2 == 0) ? 1.0 / (nd * nd - 1.0) : 1.0 / (nd * nd);
  w[0] = wend;
  w[N] = wend;
  const double scale = 0.5 * (b - a);
  for (double& v : w) v *= scale;
  return w;  // node order symmetric, so no reversal needed
}

std::vector<double> cheb_analyze(const std::vector<double>& f) {
  const std::size_t n = f.size();
  if (n < 2) throw std::invalid_argument("cheb_analyze: need n >= 2");
  const std::size_t N = n - 1;
  const double nd = static_cast<double>(N);
  std::vector<double> a(n);
  for (std::size_t k = 0; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= N; ++j) {
      const double cj = (j == 0 || j == N) ? 0.5 : 1.0;
      s += cj * f[j] *
           std::cos(std::numbers::pi * static_cast<double>(j * k) / nd);
    }
    const double ck = (k == 0 || k == N) ? 2.0 : 1.0;
    a[k] = (k % 2 == 0 ? 2.0 : -2.0) * s / (ck * nd);
  }
  return a;
}

std::vector<double> cheb_synthesize(const std::vector<double>& a) {
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("cheb_synthesize: need n >= 2");
  const std::size_t N = n - 1;
  const double nd = static_cast<double>(N);
  std::vector<double> f(n);
  for (std::size_t j = 0; j <= N; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k <= N; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      s += sign * a[k] *
           std::cos(std::numbers::pi * static_cast<double>(j * k) / nd);
    }
    f[j] = s;
  }
  return f;
}

std::vector<double> cheb_diff_coeffs(const std::vector<double>& a, double lo,
                                     double hi) {
  const std::size_t n = a.size();
  std::vector<double> b(n, 0.0);
  if (n < 2) return b;
  for (std::size_t k = n - 1; k >= 1; --k) {
    b[k - 1] =
        (k + 1 < n ? b[k + 1] : 0.0) + 2.0 * static_cast<double>(k) * a[k];
  }
  b[0] *= 0.5;
  const double scale = 2.0 / (hi - lo);
  for (double& v : b) v *= scale;
  return b;
}

void cheb_column_derivatives(const std::vector<double>& col, double lo,
                             double hi, std::vector<double>& d1,
                             std::vector<double>* d2) {
  std::vector<double> a = cheb_analyze(col);
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  const double noise = 1e-14 * amax;
  for (double& v : a)
    if (std::abs(v) <= noise) v = 0.0;
  const std::vector<double> b = cheb_diff_coeffs(a, lo, hi);
  d1 = cheb_synthesize(b);
  if (d2) *d2 = cheb_synthesize(cheb_diff_coeffs(b, lo, hi));
}

void apply_matrix(const std::vector<double>& D, const std::vector<double>& f,
                  std::vector<double>& out) {
  const std::size_t n = f.size();
  out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    const double* row = D.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * f[j];
    out[i] = s;
  }
}

}  // namespace eulershell
