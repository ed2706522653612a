#include "cgrate/coarsen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "cgrate/errors.hpp"

namespace cgrate {

namespace {

void check_core_size(const ChainSystem& sys, int core_size) {
  if (core_size < 2 || core_size % 2 != 0 || core_size > sys.n_free())
    throw std::invalid_argument("core_size must be even with 2 <= core_size <= " +
                                std::to_string(sys.n_free()));
}

RepatomSet from_atoms(const ChainSystem& sys, const std::set<int>& atoms) {
  RepatomSet set;
  set.indices.reserve(atoms.size());
  for (int atom : atoms) set.indices.push_back(atom - 1);
  set.validate(sys.n_free());
  return set;
}

std::set<int> core_atoms(const ChainSystem& sys, int core_size) {
  std::set<int> atoms;
  for (int l = 0; l < core_size / 2; ++l) {
    atoms.insert(sys.center_left - l);
    atoms.insert(sys.center_left + 1 + l);
  }
  return atoms;
}

}  // namespace

void RepatomSet::validate(int n_free) const {
  if (indices.empty()) throw std::invalid_argument("repatom set must be non-empty");
  int prev = -1;
  for (int idx : indices) {
    if (idx < 0 || idx >= n_free)
      throw std::out_of_range("repatom index " + std::to_string(idx) + " out of range");
    if (idx <= prev)
      throw std::invalid_argument("repatom indices must be strictly increasing");
    prev = idx;
  }
}

RepatomSet all_repatoms(int n_free) {
  RepatomSet set;
  set.indices.resize(static_cast<std::size_t>(n_free));
  for (int i = 0; i < n_free; ++i) set.indices[static_cast<std::size_t>(i)] = i;
  return set;
}

RepatomSet localized_indices(const ChainSystem& sys, int core_size) {
  check_core_size(sys, core_size);
  return from_atoms(sys, core_atoms(sys, core_size));
}

RepatomSet delocalized_indices(const ChainSystem& sys, int core_size) {
  check_core_size(sys, core_size);
  std::set<int> atoms = core_atoms(sys, core_size);
  const int reach = core_size / 2 - 1;
  for (int l = 1;; ++l) {
    const int offset = reach + (1 << l) + (l - 1);
    const int left = sys.center_left - offset;
    const int right = sys.center_left + 1 + offset;
    const bool left_ok = left > 0;
    const bool right_ok = right < sys.n_atoms - 1;
    if (!left_ok && !right_ok) break;
    if (left_ok) atoms.insert(left);
    if (right_ok) atoms.insert(right);
  }
  return from_atoms(sys, atoms);
}

RepatomSet delocalized_minimal_indices(const ChainSystem& sys, int core_size) {
  check_core_size(sys, core_size);
  std::set<int> atoms = core_atoms(sys, core_size);
  const int offset = core_size / 2 - 1 + 2;  // one constrained atom between core and peripheral
  const int left = sys.center_left - offset;
  const int right = sys.center_left + 1 + offset;
  if (left > 0) atoms.insert(left);
  if (right < sys.n_atoms - 1) atoms.insert(right);
  return from_atoms(sys, atoms);
}

PartitionedHessian partition_hessian(const Eigen::MatrixXd& d_at, const RepatomSet& repatoms) {
  const int n = static_cast<int>(d_at.rows());
  if (d_at.cols() != n) throw std::invalid_argument("d_at must be square");
  repatoms.validate(n);

  PartitionedHessian part;
  part.repatoms = repatoms;
  std::vector<bool> is_rep(static_cast<std::size_t>(n), false);
  for (int idx : repatoms.indices) is_rep[static_cast<std::size_t>(idx)] = true;
  for (int i = 0; i < n; ++i)
    if (!is_rep[static_cast<std::size_t>(i)]) part.constrained.push_back(i);

  const int nr = part.n_repatoms();
  const int nc = part.n_constrained();
  part.R.resize(nr, nr);
  part.B.resize(nr, nc);
  part.C.resize(nc, nc);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nr; ++j)
      part.R(i, j) = d_at(part.repatoms.indices[static_cast<std::size_t>(i)],
                          part.repatoms.indices[static_cast<std::size_t>(j)]);
    for (int j = 0; j < nc; ++j)
      part.B(i, j) = d_at(part.repatoms.indices[static_cast<std::size_t>(i)],
                          part.constrained[static_cast<std::size_t>(j)]);
  }
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j)
      part.C(i, j) = d_at(part.constrained[static_cast<std::size_t>(i)],
                          part.constrained[static_cast<std::size_t>(j)]);
  return part;
}

Eigen::MatrixXd reassemble(const PartitionedHessian& part) {
  const int n = part.dimension();
  Eigen::MatrixXd d(n, n);
  const auto& rep = part.repatoms.indices;
  const auto& con = part.constrained;
  for (int i = 0; i < part.n_repatoms(); ++i) {
    for (int j = 0; j < part.n_repatoms(); ++j)
      d(rep[static_cast<std::size_t>(i)], rep[static_cast<std::size_t>(j)]) = part.R(i, j);
    for (int j = 0; j < part.n_constrained(); ++j) {
      d(rep[static_cast<std::size_t>(i)], con[static_cast<std::size_t>(j)]) = part.B(i, j);
      d(con[static_cast<std::size_t>(j)], rep[static_cast<std::size_t>(i)]) = part.B(i, j);
    }
  }
  for (int i = 0; i < part.n_constrained(); ++i)
    for (int j = 0; j < part.n_constrained(); ++j)
      d(con[static_cast<std::size_t>(i)], con[static_cast<std::size_t>(j)]) = part.C(i, j);
  return d;
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_constrained(const PartitionedHessian& part) {
  Eigen::LLT<Eigen::MatrixXd> llt(part.C);
  if (llt.info() != Eigen::Success)
    throw RepatomRegionError("repatom region inappropriate: constrained block is not "
                             "positive definite");
  return llt;
}

}  // namespace

CoarseHessian schur_complement(const PartitionedHessian& part) {
  CoarseHessian coarse;
  coarse.n_repatoms = part.n_repatoms();
  coarse.n_constrained = part.n_constrained();
  if (part.n_constrained() == 0) {
    coarse.D_cg = part.R;
    coarse.log_det_C = 0.0;
    return coarse;
  }

  const auto llt = factor_constrained(part);
  const Eigen::MatrixXd x = llt.solve(part.B.transpose());  // C^{-1} B^T
  Eigen::MatrixXd d_cg = part.R - part.B * x;
  coarse.D_cg = 0.5 * (d_cg + d_cg.transpose());  // suppress roundoff asymmetry

  double log_det = 0.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < part.n_constrained(); ++i) log_det += 2.0 * std::log(l(i, i));
  coarse.log_det_C = log_det;
  return coarse;
}

Eigen::VectorXd relaxed_response(const PartitionedHessian& part, const Eigen::VectorXd& u_r) {
  if (u_r.size() != part.n_repatoms())
    throw std::invalid_argument("u_r must have one entry per repatom");
  if (part.n_constrained() == 0) return Eigen::VectorXd(0);
  const auto llt = factor_constrained(part);
  return -llt.solve(part.B.transpose() * u_r);
}

Eigen::VectorXd embed_min(const PartitionedHessian& part, const Eigen::VectorXd& v) {
  const Eigen::VectorXd u_c = relaxed_response(part, v);
  Eigen::VectorXd full(part.dimension());
  for (int i = 0; i < part.n_repatoms(); ++i)
    full[part.repatoms.indices[static_cast<std::size_t>(i)]] = v[i];
  for (int j = 0; j < part.n_constrained(); ++j)
    full[part.constrained[static_cast<std::size_t>(j)]] = u_c[j];
  return full;
}

}  // namespace cgrate
