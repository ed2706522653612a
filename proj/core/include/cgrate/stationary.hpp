#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cgrate/chain.hpp"

namespace cgrate {

enum class StationaryKind { minimum, saddle };

/// A configuration with (numerically) zero gradient.
struct StationaryPoint {
  Configuration config;
  double energy = 0.0;
  StationaryKind kind = StationaryKind::minimum;
  double residual = 0.0;    ///< max-norm of the gradient at the result
  int negative_count = 0;   ///< negative eigenvalues of the Hessian at the result
};

struct SolverOptions {
  double tolerance = 1e-10;  ///< gradient max-norm target
  int max_iterations = 200;
  double drag_step = 1e-3;   ///< central-bond increment of the drag protocol
};

/// Newton descent with backtracking from `initial`. The result satisfies
/// residual < tolerance and has a positive-definite Hessian; anything else
/// throws (ConvergenceError / SaddleSignatureError).
StationaryPoint find_minimum(const ChainSystem& sys, const Configuration& initial,
                             const SolverOptions& opts = {});

/// Locates the fracture saddle by stretching the central bond in small
/// increments, relaxing all remaining coordinates at each step, bracketing
/// the sign change of the residual central-bond force, and finishing with a
/// Newton polish on all coordinates. Requires the two-state regime (a saddle
/// must exist along the drag path); otherwise throws ConvergenceError.
StationaryPoint find_saddle_drag(const ChainSystem& sys, const SolverOptions& opts = {});

/// One root of the symmetric force-balance equation
///   spring_k * ((q_c - q_0)/c - rest) = V_c'(L - 2 (q_c - q_0)),
/// together with the Hessian signature of the assembled configuration.
struct ForceBalanceRoot {
  double q_center = 0.0;      ///< position of atom center_left
  double central_bond = 0.0;  ///< L - 2 (q_center - q_0)
  double spring_bond = 0.0;   ///< common length of every spring bond
  double residual = 0.0;      ///< force-balance residual at the root
  int negative_count = 0;
};

/// All force-balance roots with q_center in (q_0, q_0 + L/2), found by a
/// bracketing scan with bisection refinement. Typically three: the intact
/// minimum, the fracture saddle, and the broken-chain minimum.
std::vector<ForceBalanceRoot> force_balance_roots(const ChainSystem& sys);

/// Picks the unique root whose assembled symmetric configuration has exactly
/// one negative Hessian eigenvalue. Throws SaddleSignatureError when no root
/// (or more than one) qualifies.
StationaryPoint find_saddle_analytic(const ChainSystem& sys, const SolverOptions& opts = {});

/// Closed-form solution of the eigenmode difference equation
///   spring_k (-u_{i-1} + 2 u_i - u_{i+1}) = lambda u_i
/// on the spring-only half of the chain: u_i = alpha r_+^i + beta r_-^i.
struct AnalyticEigenmode {
  double lambda_at = 0.0;
  double r_plus = 0.0;   ///< growth root, > 1
  double r_minus = 0.0;  ///< decay root, in (0, 1); r_plus * r_minus = 1
  double coeff_plus = 0.0;
  double coeff_minus = 0.0;
  double u_center = 0.0;
};

/// Coefficients for a chain whose left central atom is `center_index` bonds
/// from the fixed end. Requires lambda < 0 (real characteristic roots).
AnalyticEigenmode analytic_mode(double lambda, double u_center, int center_index,
                                double spring_k = 1.0);

/// Reconstructs the full unstable eigenmode over the n_free degrees of
/// freedom: the difference-equation solution on the left half (u at the fixed
/// end is 0, u at the central atom is u_center) mirrored antisymmetrically
/// onto the right half.
Eigen::VectorXd analytic_unstable_mode(double lambda, double u_center, int n_free,
                                       double spring_k = 1.0);

}  // namespace cgrate
