#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cgrate/errors.hpp"

namespace cgrate {

/// Bond potential parameters: a Lennard-Jones central bond embedded in a
/// harmonic-spring chain.
struct PotentialParams {
  double epsilon = 1.0;      ///< LJ well depth
  double sigma = 0.0;        ///< LJ length scale (0 = use default 2^{-1/6})
  double spring_rest = 1.0;  ///< harmonic rest length
  double spring_k = 1.0;     ///< harmonic stiffness

  /// Defaults: epsilon = 1, sigma = 2^{-1/6} (LJ minimum at r = 1),
  /// unit springs with rest length 1.
  static PotentialParams standard();
};

/// A 1-D chain with fixed endpoints under tensile strain. The bond between
/// atoms center_left and center_left + 1 is the weak Lennard-Jones bond; all
/// other bonds are harmonic springs. Atoms are labelled 0..n_atoms-1; atoms
/// 0 and n_atoms-1 are pinned and carry no degrees of freedom.
struct ChainSystem {
  int n_atoms = 0;            ///< total atom count, including the two pinned endpoints
  double strain = 1.0;        ///< tensile stretch factor s
  double left_boundary = 0.0;
  double right_boundary = 0.0;
  PotentialParams params;
  std::vector<double> masses;  ///< per-atom masses, size n_atoms
  int center_left = 0;         ///< left atom of the weak bond, n_atoms/2 - 1

  /// Builds the standard setup: q_0 = 0, q_{n-1} = (n-1) * strain, unit masses.
  static ChainSystem tensile(int n_atoms, double strain,
                             PotentialParams params = PotentialParams::standard());

  int n_free() const { return n_atoms - 2; }

  /// Throws std::invalid_argument when an invariant is violated
  /// (odd or tiny n_atoms, non-positive parameters, degenerate boundaries).
  void validate() const;
};

/// Positions of the free atoms in mass-weighted coordinates,
/// q~_i = sqrt(m_i) q_i. For unit masses this equals the raw positions.
struct Configuration {
  Eigen::VectorXd free_positions;
};

/// Free atoms placed uniformly between the boundaries.
Configuration uniform_configuration(const ChainSystem& sys);

/// Raw (unweighted) positions of all n_atoms atoms, boundaries included.
std::vector<double> raw_positions(const ChainSystem& sys, const Configuration& config);

/// Mass-weights a vector of raw free-atom positions.
Configuration to_weighted(const ChainSystem& sys, const Eigen::VectorXd& raw_free);

// Bond potentials. The central bond derivative order 0/1/2 functions are the
// Lennard-Jones value and its first two radial derivatives; all throw
// BondLengthError for r <= 0 since the LJ form diverges there.
double central_bond_energy(double r, const PotentialParams& p);
double central_bond_d1(double r, const PotentialParams& p);
double central_bond_d2(double r, const PotentialParams& p);

double spring_energy(double r, const PotentialParams& p);
double spring_d1(double r, const PotentialParams& p);
double spring_d2(double r, const PotentialParams& p);

/// Total potential energy of the chain. Throws BondLengthError if any bond
/// has non-positive length.
double total_energy(const ChainSystem& sys, const Configuration& config);

/// Gradient of total_energy with respect to the mass-weighted free positions.
Eigen::VectorXd gradient(const ChainSystem& sys, const Configuration& config);

/// Mass-weighted Hessian over the free atoms (the dynamical matrix when
/// evaluated at a stationary point). Exactly symmetric by construction and
/// tridiagonal for this nearest-neighbor chain.
Eigen::MatrixXd hessian(const ChainSystem& sys, const Configuration& config);

}  // namespace cgrate
