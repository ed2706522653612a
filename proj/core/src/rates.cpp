#include "cgrate/rates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cgrate/errors.hpp"
#include "cgrate/spectral.hpp"

namespace cgrate {

std::pair<double, Eigen::VectorXd> unstable_mode(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.size() == 0)
    throw std::invalid_argument("matrix must be square and non-empty");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const double threshold = negative_eigenvalue_threshold(m);
  const auto& eigs = solver.eigenvalues();  // ascending

  int negatives = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (eigs[i] < -threshold) ++negatives;
  if (negatives == 0)
    throw SaddleSignatureError("no transition pathway: spectrum has no negative eigenvalue");
  if (negatives > 1)
    throw SaddleSignatureError("not a first-order saddle: spectrum has " +
                               std::to_string(negatives) + " negative eigenvalues");
  return {eigs[0], solver.eigenvectors().col(0)};
}

ModePair make_mode_pair(double lambda_at, const Eigen::VectorXd& u_at,
                        const Eigen::MatrixXd& d_cg, const RepatomSet& repatoms) {
  ModePair pair;
  pair.lambda_at = lambda_at;
  pair.u_at = u_at;
  auto [lambda_cg, v_cg] = unstable_mode(d_cg);
  pair.lambda_cg = lambda_cg;

  double overlap = 0.0;
  for (int i = 0; i < repatoms.size(); ++i)
    overlap += u_at[repatoms.indices[static_cast<std::size_t>(i)]] * v_cg[i];
  if (std::abs(overlap) <= 1e-12)
    throw DegenerateOverlapError("coarse unstable mode is numerically orthogonal to the "
                                 "repatom part of the atomistic mode");
  pair.v_cg = overlap < 0.0 ? Eigen::VectorXd(-v_cg) : v_cg;
  return pair;
}

double relative_rate_error(double lambda_at, double lambda_cg) {
  if (!(lambda_at < 0.0) || !(lambda_cg < 0.0))
    throw std::invalid_argument("both eigenvalues must be strictly negative");
  return std::sqrt(lambda_cg / lambda_at) - 1.0;
}

ErrorBreakdown error_decomposition(const PartitionedHessian& part,
                                   const Eigen::VectorXd& u_at,
                                   const Eigen::VectorXd& v_cg, double lambda_at,
                                   double lambda_cg) {
  if (u_at.size() != part.dimension())
    throw std::invalid_argument("u_at must span the full system");
  if (v_cg.size() != part.n_repatoms())
    throw std::invalid_argument("v_cg must span the repatoms");

  Eigen::VectorXd u_r(part.n_repatoms());
  for (int i = 0; i < part.n_repatoms(); ++i)
    u_r[i] = u_at[part.repatoms.indices[static_cast<std::size_t>(i)]];
  Eigen::VectorXd u_c(part.n_constrained());
  for (int j = 0; j < part.n_constrained(); ++j)
    u_c[j] = u_at[part.constrained[static_cast<std::size_t>(j)]];

  ErrorBreakdown breakdown;
  breakdown.overlap = v_cg.dot(u_r);
  if (std::abs(breakdown.overlap) <= 1e-12)
    throw DegenerateOverlapError("overlap v_cg . u_at^r vanished; decomposition undefined");

  if (part.n_constrained() == 0) {
    breakdown.longrange = 0.0;
  } else {
    const Eigen::VectorXd u_c_min = relaxed_response(part, u_r);
    breakdown.longrange = v_cg.dot(part.B * (u_c_min - u_c));
  }
  breakdown.eigen_gap = lambda_cg - lambda_at;
  breakdown.identity_residual =
      std::abs(breakdown.eigen_gap - breakdown.longrange / breakdown.overlap);
  breakdown.rel_rate_error = relative_rate_error(lambda_at, lambda_cg);
  return breakdown;
}

double log_z_saddle_coarse(double v_saddle, const Eigen::VectorXd& spectrum_cg,
                           double log_det_c, int n_constrained,
                           const RateParams& params) {
  if (!(params.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (n_constrained < 0) throw std::invalid_argument("n_constrained must be >= 0");
  if (spectrum_cg.size() == 0) throw std::invalid_argument("spectrum must be non-empty");

  const double threshold = 1e-10 * spectrum_cg.cwiseAbs().maxCoeff();
  int negatives = 0;
  double lambda_neg = 0.0;
  for (Eigen::Index i = 0; i < spectrum_cg.size(); ++i) {
    if (spectrum_cg[i] < -threshold) {
      ++negatives;
      lambda_neg = spectrum_cg[i];
    }
  }
  if (negatives != 1)
    throw SaddleSignatureError("saddle partition function needs exactly one negative "
                               "eigenvalue, got " + std::to_string(negatives));

  const double n_total =
      static_cast<double>(spectrum_cg.size()) + static_cast<double>(params.dimension) *
                                                    static_cast<double>(n_constrained);
  return -params.beta * v_saddle +
         0.5 * (n_total - 1.0) * std::log(2.0 * std::numbers::pi / params.beta) +
         0.5 * (std::log(std::abs(lambda_neg)) - log_det_c - log_abs_det(spectrum_cg));
}

double log_z_saddle_atomistic(double v_saddle, const Eigen::VectorXd& spectrum,
                              const RateParams& params) {
  return log_z_saddle_coarse(v_saddle, spectrum, 0.0, 0, params);
}

double log_z_basin(double v_minimum, const Eigen::VectorXd& spectrum,
                   const RateParams& params) {
  if (!(params.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    if (!(spectrum[i] > 0.0))
      throw SaddleSignatureError("basin partition function needs a positive spectrum");
    log_det += std::log(spectrum[i]);
  }
  return -params.beta * v_minimum +
         0.5 * static_cast<double>(spectrum.size()) * std::log(2.0 * std::numbers::pi / params.beta) -
         0.5 * log_det;
}

double coarse_saddle_free_energy(const Eigen::VectorXd& u_r, const PartitionedHessian& part,
                                 double v_saddle, const RateParams& params) {
  if (!(params.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const CoarseHessian coarse = schur_complement(part);
  if (u_r.size() != coarse.n_repatoms)
    throw std::invalid_argument("u_r must have one entry per repatom");
  const double log_gauss = static_cast<double>(params.dimension) *
                           static_cast<double>(coarse.n_constrained) *
                           std::log(2.0 * std::numbers::pi / params.beta);
  return v_saddle + (coarse.log_det_C - log_gauss) / (2.0 * params.beta) +
         0.5 * u_r.dot(coarse.D_cg * u_r);
}

double coarse_kinetic_constant(const RateParams& params, int n_constrained) {
  if (!(params.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (n_constrained < 0) throw std::invalid_argument("n_constrained must be >= 0");
  return -static_cast<double>(params.dimension) * static_cast<double>(n_constrained) /
         (2.0 * params.beta) * std::log(2.0 * std::numbers::pi / params.beta);
}

double log_htst_rate(double log_z_saddle, double log_z_basin, const RateParams& params) {
  if (!(params.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return std::log(0.5) + 0.5 * std::log(2.0 / (std::numbers::pi * params.beta)) +
         (log_z_saddle - log_z_basin);
}

double htst_rate(double log_z_saddle, double log_z_basin, const RateParams& params) {
  return std::exp(log_htst_rate(log_z_saddle, log_z_basin, params));
}

}  // namespace cgrate
