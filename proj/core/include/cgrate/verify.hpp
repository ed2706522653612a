#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "cgrate/sweep.hpp"

namespace cgrate {

/// One verification check: `passed` iff `measured <= tolerance`.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// True when m equals its transpose bitwise.
bool bitwise_symmetric(const Eigen::MatrixXd& m);

/// Runs the full invariant suite for the given configuration: derivative
/// finite-difference checks, saddle cross-validation and symmetry, analytic
/// eigenmode reconstruction, eigenvalue ordering and interlacing across every
/// mesh of the sweep, the determinant and rate-ratio identities, the
/// eigenvalue-gap decomposition identity, embedding residuals, temperature
/// invariance, and (for chains small enough to integrate directly) the
/// Monte-Carlo partition-function and quadrature free-energy oracles.
std::vector<CheckResult> run_verification(const SweepConfig& config);

/// Prints one line per check; returns true iff everything passed.
bool print_report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace cgrate
