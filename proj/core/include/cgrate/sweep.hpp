#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cgrate/chain.hpp"
#include "cgrate/rates.hpp"
#include "cgrate/stationary.hpp"

namespace cgrate {

enum class Scheme { localized, delocalized, delocalized_minimal };

std::string to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(const std::string& name);

enum class SaddleMethod { drag, analytic, both };

std::string to_string(SaddleMethod method);
std::optional<SaddleMethod> saddle_method_from_string(const std::string& name);

/// One batch of coarse-graining experiments: every (scheme, strain, core_size)
/// combination becomes one row.
struct SweepConfig {
  int n_atoms = 202;
  std::vector<double> strains = {1.02, 1.035};
  std::vector<Scheme> schemes = {Scheme::localized, Scheme::delocalized};
  std::vector<int> core_sizes;  ///< even values; empty = 2..n_free step 2
  double beta = 1.0;
  SaddleMethod saddle_method = SaddleMethod::both;
  std::string output_path = "sweep.csv";
  bool verify = false;

  /// Throws std::invalid_argument on odd core sizes, strains <= 1, etc.
  void validate() const;

  /// The core_sizes list with the default (2..n_free step 2) applied.
  std::vector<int> resolved_core_sizes() const;
};

struct SweepRow {
  std::string scheme;
  double strain = 0.0;
  int core_size = 0;
  int n_repatoms = 0;
  double lambda_at = 0.0;
  double lambda_cg = 0.0;
  double rel_rate_error = 0.0;
  double overlap_term = 0.0;
  double longrange_term = 0.0;
  double identity_residual = 0.0;
  std::string error;  ///< non-empty marks a failed row; numeric fields are NaN

  bool ok() const { return error.empty(); }
};

/// Runs the sweep in deterministic (scheme, strain, core_size ascending)
/// order. A failed mesh (saddle-search failure, non-positive-definite
/// constrained block, invalid core size) produces a row with the error
/// marker set instead of aborting the sweep.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Fixed CSV schema; column order never changes.
std::string csv_header();

/// Serializes rows with 17 significant digits so that every finite double
/// round-trips exactly. Lines end with "\n".
std::string to_csv(const std::vector<SweepRow>& rows);

/// Writes to_csv() to `path`; throws std::runtime_error on I/O failure.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Parses emit_csv output back into rows (header required).
std::vector<SweepRow> parse_csv(std::istream& in);
std::vector<SweepRow> parse_csv_string(const std::string& text);

/// Per-strain artifacts shared by every mesh of a sweep: the saddle point,
/// the dynamical matrix, and its unstable eigenpair.
struct SaddleContext {
  StationaryPoint saddle;
  Eigen::MatrixXd d_at;
  Eigen::VectorXd spectrum_at;
  double lambda_at = 0.0;
  Eigen::VectorXd u_at;
};

/// Locates the saddle per `method`. With SaddleMethod::both the drag and
/// analytic routes are cross-checked (coordinatewise agreement to 1e-8) and
/// the analytic result is returned.
SaddleContext make_saddle_context(const ChainSystem& sys, SaddleMethod method);

/// Mesh generation dispatch by scheme.
RepatomSet scheme_indices(Scheme scheme, const ChainSystem& sys, int core_size);

}  // namespace cgrate
