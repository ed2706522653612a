#pragma once

#include <Eigen/Dense>
#include <utility>

#include "cgrate/coarsen.hpp"

namespace cgrate {

/// Thermodynamic inputs for rate evaluation. beta = 1/(k_B T) in reduced units.
struct RateParams {
  double beta = 1.0;
  int dimension = 1;  ///< spatial dimension d (1 for the chain)
};

/// The unique negative eigenpair of a symmetric matrix, eigenvector
/// normalized. Throws SaddleSignatureError when the spectrum has zero
/// ("no transition pathway") or more than one ("not a first-order saddle")
/// negative eigenvalues.
std::pair<double, Eigen::VectorXd> unstable_mode(const Eigen::MatrixXd& m);

/// Matched unstable eigenpairs of the atomistic and coarse dynamical
/// matrices, with the coarse eigenvector sign chosen so that the overlap
/// with the repatom part of the atomistic mode is positive.
struct ModePair {
  double lambda_at = 0.0;
  Eigen::VectorXd u_at;
  double lambda_cg = 0.0;
  Eigen::VectorXd v_cg;
};

/// Builds the pair from a precomputed atomistic eigenpair and the coarse
/// matrix. Throws DegenerateOverlapError when the sign convention cannot be
/// applied (|u_at^r . v_cg| <= 1e-12).
ModePair make_mode_pair(double lambda_at, const Eigen::VectorXd& u_at,
                        const Eigen::MatrixXd& d_cg, const RepatomSet& repatoms);

/// sqrt(lambda_cg / lambda_at) - 1, the fractional overestimate of the rate.
/// Both eigenvalues must be strictly negative.
double relative_rate_error(double lambda_at, double lambda_cg);

/// Exact decomposition of the eigenvalue gap:
///   lambda_cg - lambda_at = (v_cg . B (u^c_min - u^c)) / (v_cg . u^r)
/// where u^r, u^c are the repatom/constrained parts of u_at and
/// u^c_min = -C^{-1} B^T u^r.
struct ErrorBreakdown {
  double overlap = 0.0;            ///< v_cg . u_at^r  (= ||u_at^r|| cos(theta))
  double longrange = 0.0;          ///< v_cg . B (u^c_min - u_at^c)
  double eigen_gap = 0.0;          ///< lambda_cg - lambda_at
  double identity_residual = 0.0;  ///< |eigen_gap - longrange / overlap|
  double rel_rate_error = 0.0;
};

ErrorBreakdown error_decomposition(const PartitionedHessian& part,
                                   const Eigen::VectorXd& u_at,
                                   const Eigen::VectorXd& v_cg, double lambda_at,
                                   double lambda_cg);

/// Log-domain saddle partition functions.  With n = spectrum size plus the
/// number of eliminated degrees of freedom,
///   log Z = -beta V_s + ((n - 1)/2) log(2 pi / beta)
///           + (log|lambda_neg| - log_det_C - sum log|eig|) / 2.
/// The atomistic form is the n_constrained = 0, log_det_C = 0 special case.
double log_z_saddle_coarse(double v_saddle, const Eigen::VectorXd& spectrum_cg,
                           double log_det_c, int n_constrained, const RateParams& params);
double log_z_saddle_atomistic(double v_saddle, const Eigen::VectorXd& spectrum,
                              const RateParams& params);

/// Harmonic basin partition function at the minimum (all eigenvalues must be
/// positive): log Z = -beta V_m + (n/2) log(2 pi / beta) - sum log(eig) / 2.
double log_z_basin(double v_minimum, const Eigen::VectorXd& spectrum,
                   const RateParams& params);

/// Log-domain partition values for one mesh at one temperature.
struct LogPartition {
  double log_z_saddle_at = 0.0;
  double log_z_saddle_cg = 0.0;
  double log_z_basin_at = 0.0;
  RateParams beta_used;
};

/// Coarse dividing-surface energy at repatom displacement u_r:
///   V(q_s) + (1/(2 beta)) log(det C / (2 pi / beta)^{d N^c}) + u_r . D_cg u_r / 2.
double coarse_saddle_free_energy(const Eigen::VectorXd& u_r, const PartitionedHessian& part,
                                 double v_saddle, const RateParams& params);

/// Additive constant of the coarse kinetic energy:
///   -(d N^c / (2 beta)) log(2 pi / beta).
double coarse_kinetic_constant(const RateParams& params, int n_constrained);

/// log of R = (1/2) sqrt(2/(pi beta)) Z_saddle / Z_basin.
double log_htst_rate(double log_z_saddle, double log_z_basin, const RateParams& params);

/// exp(log_htst_rate); may overflow to infinity for huge log differences, in
/// which case callers should report the log-rate instead.
double htst_rate(double log_z_saddle, double log_z_basin, const RateParams& params);

}  // namespace cgrate
