#include "eulershell/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eulershell/errors.hpp"

namespace eulershell {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open for reading: " + path);
  return in;
}

std::vector<double> split_row(const std::string& line, std::size_t want,
                              const std::string& path) {
  std::vector<double> vals;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  if (vals.size() != want)
    throw config_error("malformed row in " + path + ": " + line);
  return vals;
}

}  // namespace

void write_shell_csv(const std::string& path, const StateField& st) {
  const ShellGrid& g = *st.p.grid;
  const SphereGrid& sph = g.sphere();
  auto out = open_out(path);
  out << "r,theta,phi,u0,u1,u2,p,rho\n";
  for (int ir = 0; ir < g.nr(); ++ir) {
    const double r = g.r(ir);
    for (int i = 0; i < sph.nlat(); ++i)
      for (int k = 0; k < sph.nlon(); ++k) {
        const std::size_t t = g.index(ir, sph.index(i, k));
        const auto et = sph.unit_theta(i, k);
        const auto ep = sph.unit_phi(i, k);
        const double wt = st.w.x.v[t] * et[0] + st.w.y.v[t] * et[1] +
                          st.w.z.v[t] * et[2];
        const double wp = st.w.x.v[t] * ep[0] + st.w.y.v[t] * ep[1] +
                          st.w.z.v[t] * ep[2];
        const double u1 = wt / r;
        const double u2 = wp / (r * sph.sin_theta(i));
        out << fmt(r) << ',' << fmt(sph.theta(i)) << ',' << fmt(sph.phi(k))
            << ',' << fmt(st.u0.v[t]) << ',' << fmt(u1) << ',' << fmt(u2)
            << ',' << fmt(st.p.v[t]) << ',' << fmt(st.rho.v[t]) << '\n';
      }
  }
}

StateField read_shell_csv(const std::string& path,
                          std::shared_ptr<const ShellGrid> grid,
                          const GasConstants& gas) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,theta,phi", 0) != 0)
    throw config_error("missing shell CSV header in " + path);
  StateField st(grid);
  const SphereGrid& sph = grid->sphere();
  for (int ir = 0; ir < grid->nr(); ++ir)
    for (int i = 0; i < sph.nlat(); ++i)
      for (int k = 0; k < sph.nlon(); ++k) {
        if (!std::getline(in, line))
          throw config_error("shell CSV truncated: " + path);
        const auto v = split_row(line, 8, path);
        const std::size_t t = grid->index(ir, sph.index(i, k));
        const double r = grid->r(ir);
        if (std::abs(v[0] - r) > 1e-12 * r ||
            std::abs(v[1] - sph.theta(i)) > 1e-12 ||
            std::abs(v[2] - sph.phi(k)) > 1e-12)
          throw config_error("shell CSV grid mismatch in " + path);
        st.u0.v[t] = v[3];
        const double wt = v[4] * r;
        const double wp = v[5] * r * sph.sin_theta(i);
        const auto et = sph.unit_theta(i, k);
        const auto ep = sph.unit_phi(i, k);
        st.w.x.v[t] = wt * et[0] + wp * ep[0];
        st.w.y.v[t] = wt * et[1] + wp * ep[1];
        st.w.z.v[t] = wt * et[2] + wp * ep[2];
        st.p.v[t] = v[6];
        st.rho.v[t] = v[7];
        const double c2 = gas.gamma * v[6] / v[7];
        const double sp2 = v[3] * v[3] + wt * wt + wp * wp;
        st.E.v[t] = bernoulli(gas, sp2, c2);
        st.A.v[t] = A_from_state(gas, v[6], v[7]);
      }
  return st;
}

void write_background_csv(const std::string& path, const RadialProfile& prof) {
  auto out = open_out(path);
  out << "r,u,p,rho,M,E,A\n";
  const GasConstants& gas = prof.gas();
  for (double r : prof.nodes()) {
    const RadialState st = prof.eval(r);
    out << fmt(r) << ',' << fmt(st.u) << ',' << fmt(st.p) << ',' << fmt(st.rho)
        << ',' << fmt(st.mach(gas)) << ',' << fmt(st.E(gas)) << ','
        << fmt(st.A(gas)) << '\n';
  }
}

void write_coeffs_csv(const std::string& path, const SphCoeffs& c) {
  auto out = open_out(path);
  out << "n,m,value\n";
  for (int n = 0; n <= c.lmax(); ++n)
    for (int m = -n; m <= n; ++m)
      out << n << ',' << m << ',' << fmt(c(n, m)) << '\n';
}

SphCoeffs read_coeffs_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,m", 0) != 0)
    throw config_error("missing coefficient CSV header in " + path);
  struct Row {
    int n, m;
    double v;
  };
  std::vector<Row> rows;
  int lmax = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto v = split_row(line, 3, path);
    rows.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), v[2]});
    lmax = std::max(lmax, rows.back().n);
  }
  SphCoeffs c(lmax);
  for (const Row& r : rows) c(r.n, r.m) = r.v;
  return c;
}

void write_front_csv(const std::string& path, const SphereGrid& g,
                     const std::vector<double>& psi) {
  if (psi.size() != g.npoints())
    throw config_error("front data size does not match the sphere grid");
  auto out = open_out(path);
  out << "theta,phi,psi\n";
  for (int i = 0; i < g.nlat(); ++i)
    for (int k = 0; k < g.nlon(); ++k)
      out << fmt(g.theta(i)) << ',' << fmt(g.phi(k)) << ','
          << fmt(psi[g.index(i, k)]) << '\n';
}

void write_scondition_csv(const std::string& path,
                          const std::vector<SConditionRow>& rows) {
  auto out = open_out(path);
  out << "rb,n,theta\n";
  for (const auto& r : rows)
    out << fmt(r.rb) << ',' << r.n << ',' << fmt(r.theta) << '\n';
}

}  // namespace eulershell
