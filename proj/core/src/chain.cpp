#include "cgrate/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cgrate {

namespace {

double pow6(double x) {
  double x2 = x * x;
  return x2 * x2 * x2;
}

void check_bond(double r, int bond) {
  if (!(r > 0.0)) {
    throw BondLengthError("bond " + std::to_string(bond) +
                          " has non-positive length " + std::to_string(r));
  }
}

}  // namespace

PotentialParams PotentialParams::standard() {
  PotentialParams p;
  p.sigma = std::pow(2.0, -1.0 / 6.0);
  return p;
}

ChainSystem ChainSystem::tensile(int n_atoms, double strain, PotentialParams params) {
  ChainSystem sys;
  sys.n_atoms = n_atoms;
  sys.strain = strain;
  sys.left_boundary = 0.0;
  sys.right_boundary = (n_atoms - 1) * strain;
  sys.params = params;
  sys.masses.assign(static_cast<std::size_t>(n_atoms > 0 ? n_atoms : 0), 1.0);
  sys.center_left = n_atoms / 2 - 1;
  sys.validate();
  return sys;
}

void ChainSystem::validate() const {
  if (n_atoms < 4 || n_atoms % 2 != 0)
    throw std::invalid_argument("n_atoms must be even and >= 4");
  if (!(left_boundary < right_boundary))
    throw std::invalid_argument("left_boundary must be < right_boundary");
  if (!(params.epsilon > 0.0) || !(params.sigma > 0.0) || !(params.spring_k > 0.0))
    throw std::invalid_argument("potential parameters must be positive");
  if (static_cast<int>(masses.size()) != n_atoms)
    throw std::invalid_argument("masses must have one entry per atom");
  for (double m : masses)
    if (!(m > 0.0)) throw std::invalid_argument("masses must be positive");
  if (center_left != n_atoms / 2 - 1)
    throw std::invalid_argument("center_left must be n_atoms/2 - 1");
}

Configuration uniform_configuration(const ChainSystem& sys) {
  const int nf = sys.n_free();
  const double spacing = (sys.right_boundary - sys.left_boundary) / (sys.n_atoms - 1);
  Eigen::VectorXd raw(nf);
  for (int i = 0; i < nf; ++i) raw[i] = sys.left_boundary + (i + 1) * spacing;
  return to_weighted(sys, raw);
}

Configuration to_weighted(const ChainSystem& sys, const Eigen::VectorXd& raw_free) {
  if (raw_free.size() != sys.n_free())
    throw std::invalid_argument("raw_free has wrong length");
  Configuration c;
  c.free_positions.resize(sys.n_free());
  for (int i = 0; i < sys.n_free(); ++i)
    c.free_positions[i] = raw_free[i] * std::sqrt(sys.masses[static_cast<std::size_t>(i + 1)]);
  return c;
}

std::vector<double> raw_positions(const ChainSystem& sys, const Configuration& config) {
  if (config.free_positions.size() != sys.n_free())
    throw std::invalid_argument("configuration does not match system size");
  std::vector<double> q(static_cast<std::size_t>(sys.n_atoms));
  q.front() = sys.left_boundary;
  q.back() = sys.right_boundary;
  for (int i = 0; i < sys.n_free(); ++i)
    q[static_cast<std::size_t>(i + 1)] =
        config.free_positions[i] / std::sqrt(sys.masses[static_cast<std::size_t>(i + 1)]);
  return q;
}

double central_bond_energy(double r, const PotentialParams& p) {
  if (!(r > 0.0)) throw BondLengthError("central bond length must be positive");
  const double s6 = pow6(p.sigma / r);
  return 4.0 * p.epsilon * (s6 * s6 - s6);
}

double central_bond_d1(double r, const PotentialParams& p) {
  if (!(r > 0.0)) throw BondLengthError("central bond length must be positive");
  const double s6 = pow6(p.sigma / r);
  return 4.0 * p.epsilon * (-12.0 * s6 * s6 + 6.0 * s6) / r;
}

double central_bond_d2(double r, const PotentialParams& p) {
  if (!(r > 0.0)) throw BondLengthError("central bond length must be positive");
  const double s6 = pow6(p.sigma / r);
  return 4.0 * p.epsilon * (156.0 * s6 * s6 - 42.0 * s6) / (r * r);
}

double spring_energy(double r, const PotentialParams& p) {
  const double d = r - p.spring_rest;
  return 0.5 * p.spring_k * d * d;
}

double spring_d1(double r, const PotentialParams& p) {
  return p.spring_k * (r - p.spring_rest);
}

double spring_d2(double, const PotentialParams& p) { return p.spring_k; }

double total_energy(const ChainSystem& sys, const Configuration& config) {
  const auto q = raw_positions(sys, config);
  const int lj_bond = sys.center_left + 1;  // bond b connects atoms b-1 and b
  double energy = 0.0;
  for (int b = 1; b < sys.n_atoms; ++b) {
    const double r = q[static_cast<std::size_t>(b)] - q[static_cast<std::size_t>(b - 1)];
    check_bond(r, b);
    energy += (b == lj_bond) ? central_bond_energy(r, sys.params)
                             : spring_energy(r, sys.params);
  }
  return energy;
}

Eigen::VectorXd gradient(const ChainSystem& sys, const Configuration& config) {
  const auto q = raw_positions(sys, config);
  const int lj_bond = sys.center_left + 1;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(sys.n_free());
  for (int b = 1; b < sys.n_atoms; ++b) {
    const double r = q[static_cast<std::size_t>(b)] - q[static_cast<std::size_t>(b - 1)];
    check_bond(r, b);
    const double t = (b == lj_bond) ? central_bond_d1(r, sys.params)
                                    : spring_d1(r, sys.params);
    // dV/dq_b += t, dV/dq_{b-1} -= t, restricted to free atoms
    if (b <= sys.n_free()) g[b - 1] += t;
    if (b - 1 >= 1) g[b - 2] -= t;
  }
  for (int i = 0; i < sys.n_free(); ++i)
    g[i] /= std::sqrt(sys.masses[static_cast<std::size_t>(i + 1)]);
  return g;
}

Eigen::MatrixXd hessian(const ChainSystem& sys, const Configuration& config) {
  const auto q = raw_positions(sys, config);
  const int lj_bond = sys.center_left + 1;
  const int nf = sys.n_free();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nf, nf);
  for (int b = 1; b < sys.n_atoms; ++b) {
    const double r = q[static_cast<std::size_t>(b)] - q[static_cast<std::size_t>(b - 1)];
    check_bond(r, b);
    const double k = (b == lj_bond) ? central_bond_d2(r, sys.params)
                                    : spring_d2(r, sys.params);
    const int i = b - 2;  // free index of atom b-1
    const int j = b - 1;  // free index of atom b
    if (i >= 0) h(i, i) += k;
    if (j < nf) h(j, j) += k;
    if (i >= 0 && j < nf) {
      const double w = std::sqrt(sys.masses[static_cast<std::size_t>(i + 1)] *
                                 sys.masses[static_cast<std::size_t>(j + 1)]);
      h(i, j) -= k / w;
      h(j, i) = h(i, j);
    }
  }
  for (int i = 0; i < nf; ++i) h(i, i) /= sys.masses[static_cast<std::size_t>(i + 1)];
  return h;
}

}  // namespace cgrate
