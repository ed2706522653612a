#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cgrate/chain.hpp"

namespace cgrate {

/// Free-DOF indices of the representative atoms, strictly increasing.
/// Free index k corresponds to atom k + 1 (the pinned endpoints carry no
/// degrees of freedom).
struct RepatomSet {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }

  /// Validates monotonicity and the [0, n_free) range.
  void validate(int n_free) const;
};

RepatomSet all_repatoms(int n_free);

/// A contiguous block of `core_size` repatoms centered on the weak bond:
/// atoms {center_left - l} and {center_left + 1 + l} for l = 0..core_size/2-1.
/// core_size must be even, with 2 <= core_size <= n_free.
RepatomSet localized_indices(const ChainSystem& sys, int core_size);

/// The localized core plus peripheral repatoms whose spacing doubles moving
/// outward: atoms center_left - (core_size/2 - 1) - 2^l - (l - 1) on the left
/// (while inside the chain) and the mirrored set on the right, so the gaps
/// hold 1, 2, 4, 8, ... constrained atoms.
RepatomSet delocalized_indices(const ChainSystem& sys, int core_size);

/// The localized core plus a single peripheral repatom on each side,
/// separated from the core by exactly one constrained atom.
RepatomSet delocalized_minimal_indices(const ChainSystem& sys, int core_size);

/// The saddle Hessian split by a repatom set into
///   D_at = [ R  B ; B^T  C ]
/// under the permutation that lists repatom DOFs first. Pure bookkeeping:
/// no arithmetic is performed.
struct PartitionedHessian {
  Eigen::MatrixXd R;  ///< repatom block, |r| x |r|
  Eigen::MatrixXd B;  ///< coupling block, |r| x |c|
  Eigen::MatrixXd C;  ///< constrained block, |c| x |c|
  RepatomSet repatoms;
  std::vector<int> constrained;  ///< free-DOF indices of the eliminated atoms

  int n_repatoms() const { return repatoms.size(); }
  int n_constrained() const { return static_cast<int>(constrained.size()); }
  int dimension() const { return n_repatoms() + n_constrained(); }
};

PartitionedHessian partition_hessian(const Eigen::MatrixXd& d_at, const RepatomSet& repatoms);

/// Inverse of partition_hessian: rebuilds the full matrix in the original
/// ordering, bitwise.
Eigen::MatrixXd reassemble(const PartitionedHessian& part);

/// D_cg = R - B C^{-1} B^T with the log-determinant of C accumulated from the
/// Cholesky factorization.
struct CoarseHessian {
  Eigen::MatrixXd D_cg;
  double log_det_C = 0.0;
  int n_repatoms = 0;
  int n_constrained = 0;
};

/// Eliminates the constrained block through factorization solves (no explicit
/// inverse) and symmetrizes the result. Throws RepatomRegionError when C is
/// not positive definite.
CoarseHessian schur_complement(const PartitionedHessian& part);

/// Energy-minimizing constrained displacements u^c = -C^{-1} B^T u^r for a
/// given repatom displacement.
Eigen::VectorXd relaxed_response(const PartitionedHessian& part, const Eigen::VectorXd& u_r);

/// Lifts a repatom vector v to the full space as (v, -C^{-1} B^T v), returned
/// in the original DOF ordering. Satisfies D_at v_min = (D_cg v, 0).
Eigen::VectorXd embed_min(const PartitionedHessian& part, const Eigen::VectorXd& v);

}  // namespace cgrate
