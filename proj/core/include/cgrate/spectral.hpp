#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace cgrate {

/// Eigenvalues below this magnitude are treated as numerical zeros when
/// classifying a spectrum (scale-relative cutoff).
inline double negative_eigenvalue_threshold(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return 1e-10 * m.cwiseAbs().rowwise().sum().maxCoeff();
}

inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline int count_negative_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  const double threshold = negative_eigenvalue_threshold(m);
  const Eigen::VectorXd eigs = symmetric_eigenvalues(m);
  int count = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (eigs[i] < -threshold) ++count;
  return count;
}

/// log|det| as the sum of log|eigenvalue|, safe where the raw determinant
/// would overflow.
inline double log_abs_det(const Eigen::VectorXd& eigenvalues) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    acc += std::log(std::abs(eigenvalues[i]));
  return acc;
}

}  // namespace cgrate
