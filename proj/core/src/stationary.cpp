#include "cgrate/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cgrate/spectral.hpp"

namespace cgrate {

namespace {

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Eigen::VectorXd raw_free_positions(const ChainSystem& sys, const Configuration& config) {
  const auto q = raw_positions(sys, config);
  Eigen::VectorXd raw(sys.n_free());
  for (int i = 0; i < sys.n_free(); ++i) raw[i] = q[static_cast<std::size_t>(i + 1)];
  return raw;
}

Eigen::VectorXd raw_gradient(const ChainSystem& sys, const Eigen::VectorXd& raw_free) {
  Eigen::VectorXd g = gradient(sys, to_weighted(sys, raw_free));
  for (int i = 0; i < sys.n_free(); ++i)
    g[i] *= std::sqrt(sys.masses[static_cast<std::size_t>(i + 1)]);
  return g;
}

Eigen::MatrixXd raw_hessian(const ChainSystem& sys, const Eigen::VectorXd& raw_free) {
  Eigen::MatrixXd h = hessian(sys, to_weighted(sys, raw_free));
  for (int i = 0; i < sys.n_free(); ++i) {
    const double si = std::sqrt(sys.masses[static_cast<std::size_t>(i + 1)]);
    for (int j = 0; j < sys.n_free(); ++j) {
      const double sj = std::sqrt(sys.masses[static_cast<std::size_t>(j + 1)]);
      h(i, j) *= si * sj;
    }
  }
  return h;
}

/// Drives the gradient to its numerical floor with full Newton steps,
/// keeping the best iterate seen. Suitable near both minima and saddles
/// (the Hessian is solved with an LU factorization, not a descent method).
Configuration newton_refine(const ChainSystem& sys, Configuration config,
                            double tolerance, int max_iterations) {
  Eigen::VectorXd g = gradient(sys, config);
  Configuration best = config;
  double best_residual = inf_norm(g);
  for (int it = 0; it < max_iterations && best_residual > 1e-14; ++it) {
    const Eigen::MatrixXd h = hessian(sys, config);
    const Eigen::VectorXd step = h.partialPivLu().solve(-g);
    config.free_positions += step;
    g = gradient(sys, config);
    const double r = inf_norm(g);
    if (r < best_residual) {
      best = config;
      best_residual = r;
    } else {
      break;  // at the floating-point floor
    }
  }
  if (best_residual > tolerance)
    throw ConvergenceError("Newton refinement stalled at residual " +
                           std::to_string(best_residual));
  return best;
}

/// Index bookkeeping for the drag protocol: the free coordinate of atom
/// center_left + 1 is slaved to q(center_left) + bond, leaving n_free - 1
/// reduced coordinates.
struct ReducedChain {
  const ChainSystem& sys;
  int slave;  // free index of atom center_left + 1

  explicit ReducedChain(const ChainSystem& s) : sys(s), slave(s.center_left) {}

  int n_reduced() const { return sys.n_free() - 1; }

  Eigen::VectorXd expand(const Eigen::VectorXd& x, double bond) const {
    Eigen::VectorXd raw(sys.n_free());
    for (int k = 0; k < n_reduced(); ++k) raw[k < slave ? k : k + 1] = x[k];
    raw[slave] = raw[slave - 1] + bond;
    return raw;
  }

  Eigen::VectorXd reduce(const Eigen::VectorXd& raw) const {
    Eigen::VectorXd x(n_reduced());
    for (int k = 0; k < n_reduced(); ++k) x[k] = raw[k < slave ? k : k + 1];
    return x;
  }

  // Free indices contributing to reduced coordinate k; the coordinate that
  // carries the central bond also drags the slaved atom.
  void contributors(int k, int out[2], int& count) const {
    const int fi = k < slave ? k : k + 1;
    out[0] = fi;
    count = 1;
    if (fi == slave - 1) {
      out[1] = slave;
      count = 2;
    }
  }

  Eigen::VectorXd reduced_gradient(const Eigen::VectorXd& g) const {
    Eigen::VectorXd gr(n_reduced());
    int idx[2], cnt;
    for (int k = 0; k < n_reduced(); ++k) {
      contributors(k, idx, cnt);
      gr[k] = g[idx[0]] + (cnt == 2 ? g[idx[1]] : 0.0);
    }
    return gr;
  }

  Eigen::MatrixXd reduced_hessian(const Eigen::MatrixXd& h) const {
    const int m = n_reduced();
    Eigen::MatrixXd hr(m, m);
    int ai[2], bi[2];
    int an, bn;
    for (int a = 0; a < m; ++a) {
      contributors(a, ai, an);
      for (int b = 0; b < m; ++b) {
        contributors(b, bi, bn);
        double acc = 0.0;
        for (int p = 0; p < an; ++p)
          for (int q = 0; q < bn; ++q) acc += h(ai[p], bi[q]);
        hr(a, b) = acc;
      }
    }
    return hr;
  }
};

/// Relaxes all coordinates except the central bond length (held at `bond`).
/// The reduced problem is quadratic for this chain, so Newton converges in
/// one step; the loop guards the general case.
void relax_at_fixed_bond(const ChainSystem& sys, const ReducedChain& red,
                         Eigen::VectorXd& x, double bond, int max_iterations) {
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd raw = red.expand(x, bond);
    const Eigen::VectorXd gr = red.reduced_gradient(raw_gradient(sys, raw));
    if (inf_norm(gr) < 1e-12) return;
    const Eigen::MatrixXd hr = red.reduced_hessian(raw_hessian(sys, raw));
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hr);
    if (ldlt.info() != Eigen::Success)
      throw ConvergenceError("constrained relaxation: reduced Hessian factorization failed");
    x += ldlt.solve(-gr);
  }
  const Eigen::VectorXd raw = red.expand(x, bond);
  if (inf_norm(red.reduced_gradient(raw_gradient(sys, raw))) > 1e-10)
    throw ConvergenceError("constrained relaxation did not converge");
}

}  // namespace

StationaryPoint find_minimum(const ChainSystem& sys, const Configuration& initial,
                             const SolverOptions& opts) {
  sys.validate();
  Configuration config = initial;
  double energy = total_energy(sys, config);
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (int it = 0; it <= opts.max_iterations; ++it) {
    const Eigen::VectorXd g = gradient(sys, config);
    residual = inf_norm(g);
    if (residual < opts.tolerance) {
      converged = true;
      break;
    }
    if (it == opts.max_iterations) break;

    Eigen::MatrixXd h = hessian(sys, config);
    Eigen::VectorXd step;
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() == Eigen::Success) {
      step = llt.solve(-g);
    } else {
      // shift until positive definite so the step is a descent direction
      double tau = 1e-6 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());
      for (;;) {
        Eigen::MatrixXd shifted = h;
        shifted.diagonal().array() += tau;
        Eigen::LLT<Eigen::MatrixXd> retry(shifted);
        if (retry.info() == Eigen::Success) {
          step = retry.solve(-g);
          break;
        }
        tau *= 10.0;
        if (!(tau < 1e12)) throw ConvergenceError("minimum search: Hessian shift failed");
      }
    }

    const double slope = g.dot(step);
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-12) {
      Configuration trial = config;
      trial.free_positions += t * step;
      try {
        const double e_trial = total_energy(sys, trial);
        if (e_trial <= energy + 1e-4 * t * slope) {
          config = trial;
          energy = e_trial;
          accepted = true;
          break;
        }
      } catch (const BondLengthError&) {
        // step left the admissible region; shrink
      }
      t *= 0.5;
    }
    if (!accepted) throw ConvergenceError("minimum search: line search failed");
  }

  if (!converged)
    throw ConvergenceError("minimum search did not reach tolerance " +
                           std::to_string(opts.tolerance));

  const int negatives = count_negative_eigenvalues(hessian(sys, config));
  if (negatives != 0)
    throw SaddleSignatureError("minimum search converged to a stationary point with " +
                               std::to_string(negatives) + " negative eigenvalues");
  return StationaryPoint{config, energy, StationaryKind::minimum, residual, 0};
}

StationaryPoint find_saddle_drag(const ChainSystem& sys, const SolverOptions& opts) {
  sys.validate();
  const StationaryPoint minimum = find_minimum(sys, uniform_configuration(sys), opts);

  const ReducedChain red(sys);
  const int cl = sys.center_left;
  Eigen::VectorXd raw = raw_free_positions(sys, minimum.config);
  const double bond_start = raw[cl] - raw[cl - 1];
  // once the springs are back at rest length there is no tension left to
  // balance the central bond, so the drag can stop there
  const double bond_max = (sys.right_boundary - sys.left_boundary) -
                          (sys.n_atoms - 2) * sys.params.spring_rest;

  Eigen::VectorXd x = red.reduce(raw);
  const auto residual_force = [&](double bond) {
    relax_at_fixed_bond(sys, red, x, bond, opts.max_iterations);
    return raw_gradient(sys, red.expand(x, bond))[cl];
  };

  double lo = bond_start, hi = 0.0;
  double mu_lo = 0.0;
  bool bracketed = false;
  for (int k = 1;; ++k) {
    const double bond = bond_start + k * opts.drag_step;
    if (bond > bond_max) break;
    const double mu = residual_force(bond);
    if (k == 1 && mu <= 0.0)
      throw ConvergenceError("saddle drag: step overshot the saddle; reduce drag_step");
    if (mu < 0.0) {
      hi = bond;
      bracketed = true;
      break;
    }
    lo = bond;
    mu_lo = mu;
  }
  if (!bracketed)
    throw ConvergenceError("saddle drag: no sign change of the central-bond force "
                           "along the drag path (no saddle in this regime)");
  (void)mu_lo;

  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual_force(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }

  const double bond = 0.5 * (lo + hi);
  relax_at_fixed_bond(sys, red, x, bond, opts.max_iterations);
  Configuration config = to_weighted(sys, red.expand(x, bond));
  config = newton_refine(sys, config, opts.tolerance, opts.max_iterations);

  const double residual = inf_norm(gradient(sys, config));
  const int negatives = count_negative_eigenvalues(hessian(sys, config));
  if (negatives != 1)
    throw SaddleSignatureError("saddle drag converged to a stationary point with " +
                               std::to_string(negatives) + " negative eigenvalues");
  return StationaryPoint{config, total_energy(sys, config), StationaryKind::saddle,
                         residual, 1};
}

namespace {

Eigen::VectorXd assemble_symmetric_raw(const ChainSystem& sys, double spring_bond) {
  Eigen::VectorXd raw(sys.n_free());
  for (int i = 1; i <= sys.n_free(); ++i) {
    if (i <= sys.center_left)
      raw[i - 1] = sys.left_boundary + i * spring_bond;
    else
      raw[i - 1] = sys.right_boundary - (sys.n_atoms - 1 - i) * spring_bond;
  }
  return raw;
}

}  // namespace

std::vector<ForceBalanceRoot> force_balance_roots(const ChainSystem& sys) {
  sys.validate();
  const double length = sys.right_boundary - sys.left_boundary;
  const int side_bonds = sys.center_left;

  // f(d) with d = q_center - q_0: spring tension minus central-bond tension
  const auto f = [&](double d) {
    const double spring_bond = d / side_bonds;
    const double central = length - 2.0 * d;
    return spring_d1(spring_bond, sys.params) - central_bond_d1(central, sys.params);
  };

  const int grid = 200000;
  const double d_min = length * 1e-9;
  const double d_max = 0.5 * length * (1.0 - 1e-12);
  std::vector<double> roots;
  double prev_d = d_min;
  double prev_f = f(prev_d);
  for (int k = 1; k <= grid; ++k) {
    const double d = d_min + (d_max - d_min) * k / grid;
    const double value = f(d);
    if ((value < 0.0) != (prev_f < 0.0)) {
      double lo = prev_d, hi = d;
      double f_lo = prev_f;
      for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_d = d;
    prev_f = value;
  }

  std::vector<ForceBalanceRoot> out;
  for (double d : roots) {
    ForceBalanceRoot root;
    root.q_center = sys.left_boundary + d;
    root.spring_bond = d / side_bonds;
    root.central_bond = length - 2.0 * d;
    root.residual = std::abs(f(d));
    const Configuration config =
        to_weighted(sys, assemble_symmetric_raw(sys, root.spring_bond));
    root.negative_count = count_negative_eigenvalues(hessian(sys, config));
    out.push_back(root);
  }
  return out;
}

StationaryPoint find_saddle_analytic(const ChainSystem& sys, const SolverOptions& opts) {
  const auto roots = force_balance_roots(sys);
  const ForceBalanceRoot* saddle = nullptr;
  for (const auto& root : roots) {
    if (root.negative_count == 1) {
      if (saddle != nullptr)
        throw SaddleSignatureError("force balance has multiple single-negative roots; "
                                   "saddle selection is ambiguous");
      saddle = &root;
    }
  }
  if (saddle == nullptr)
    throw SaddleSignatureError("no force-balance root with exactly one negative "
                               "Hessian eigenvalue in (0, L/2)");

  const Configuration config =
      to_weighted(sys, assemble_symmetric_raw(sys, saddle->spring_bond));
  const double residual = inf_norm(gradient(sys, config));
  if (residual > opts.tolerance)
    throw ConvergenceError("analytic saddle residual " + std::to_string(residual) +
                           " exceeds tolerance");
  return StationaryPoint{config, total_energy(sys, config), StationaryKind::saddle,
                         residual, 1};
}

AnalyticEigenmode analytic_mode(double lambda, double u_center, int center_index,
                                double spring_k) {
  if (!(lambda < 0.0)) throw std::invalid_argument("eigenvalue must be negative");
  if (center_index < 1) throw std::invalid_argument("center_index must be >= 1");
  if (!(spring_k > 0.0)) throw std::invalid_argument("spring_k must be positive");

  const double half = 0.5 * lambda / spring_k;
  const double disc = half * (half - 2.0);  // > 0 whenever lambda < 0
  const double root = std::sqrt(disc);

  AnalyticEigenmode mode;
  mode.lambda_at = lambda;
  mode.r_plus = 1.0 - half + root;
  mode.r_minus = 1.0 - half - root;
  mode.u_center = u_center;
  const double denom =
      std::pow(mode.r_minus, center_index) - std::pow(mode.r_plus, center_index);
  mode.coeff_plus = -u_center / denom;
  mode.coeff_minus = u_center / denom;
  return mode;
}

Eigen::VectorXd analytic_unstable_mode(double lambda, double u_center, int n_free,
                                       double spring_k) {
  if (n_free < 2 || n_free % 2 != 0)
    throw std::invalid_argument("n_free must be even and >= 2");
  const int center = n_free / 2;  // atom index of the left central atom
  const AnalyticEigenmode mode = analytic_mode(lambda, u_center, center, spring_k);
  const double theta = std::log(mode.r_plus);

  // sinh(i theta)/sinh(center theta) in overflow-safe form
  const auto ratio = [&](int i) {
    return std::exp((i - center) * theta) * (1.0 - std::exp(-2.0 * i * theta)) /
           (1.0 - std::exp(-2.0 * center * theta));
  };

  Eigen::VectorXd u(n_free);
  for (int f = 0; f < n_free; ++f) {
    const int atom = f + 1;
    if (atom <= center)
      u[f] = u_center * ratio(atom);
    else
      u[f] = 0.0;  // filled by the mirror pass
  }
  for (int f = 0; f < n_free; ++f) {
    const int atom = f + 1;
    if (atom > center) u[f] = -u[n_free - 1 - f];
  }
  return u;
}

}  // namespace cgrate
