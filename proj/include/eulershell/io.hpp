// CSV serialization of fields, profiles, coefficient tables and front data.
// All numeric output uses 17 significant digits so readers reproduce the
// doubles bit-exactly.
#pragma once

#include <string>
#include <vector>

#include "eulershell/background.hpp"
#include "eulershell/fields.hpp"
#include "eulershell/sphere.hpp"

namespace eulershell {

// Shell state CSV: header r,theta,phi,u0,u1,u2,p,rho; rows ordered with the
// radius outermost, colatitude next, longitude innermost. u1 and u2 are the
// coordinate components of the tangential velocity (w.e_theta)/r and
// (w.e_phi)/(r sin theta).
void write_shell_csv(const std::string& path, const StateField& st);

// Inverse of write_shell_csv onto an existing grid; recomputes E and A from
// (p, rho, velocity) with the given gas.
StateField read_shell_csv(const std::string& path,
                          std::shared_ptr<const ShellGrid> grid,
                          const GasConstants& gas);

// Background profile CSV: r,u,p,rho,M,E,A at the profile's own nodes.
void write_background_csv(const std::string& path, const RadialProfile& prof);

// Harmonic coefficients: n,m,value.
void write_coeffs_csv(const std::string& path, const SphCoeffs& c);
SphCoeffs read_coeffs_csv(const std::string& path);

// Front shape on a sphere grid: theta,phi,psi.
void write_front_csv(const std::string& path, const SphereGrid& g,
                     const std::vector<double>& psi);

// Mode stability scan: rb,n,theta rows.
struct SConditionRow {
  double rb;
  int n;
  double theta;
};
void write_scondition_csv(const std::string& path,
                          const std::vector<SConditionRow>& rows);

}  // namespace eulershell
