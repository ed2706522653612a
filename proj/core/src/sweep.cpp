#include "cgrate/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cgrate/spectral.hpp"

namespace cgrate {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::localized: return "localized";
    case Scheme::delocalized: return "delocalized";
    case Scheme::delocalized_minimal: return "delocalized-minimal";
  }
  return "unknown";
}

std::optional<Scheme> scheme_from_string(const std::string& name) {
  if (name == "localized") return Scheme::localized;
  if (name == "delocalized") return Scheme::delocalized;
  if (name == "delocalized-minimal") return Scheme::delocalized_minimal;
  return std::nullopt;
}

std::string to_string(SaddleMethod method) {
  switch (method) {
    case SaddleMethod::drag: return "drag";
    case SaddleMethod::analytic: return "analytic";
    case SaddleMethod::both: return "both";
  }
  return "unknown";
}

std::optional<SaddleMethod> saddle_method_from_string(const std::string& name) {
  if (name == "drag") return SaddleMethod::drag;
  if (name == "analytic") return SaddleMethod::analytic;
  if (name == "both") return SaddleMethod::both;
  return std::nullopt;
}

void SweepConfig::validate() const {
  ChainSystem::tensile(n_atoms, strains.empty() ? 1.5 : strains.front());
  if (strains.empty()) throw std::invalid_argument("at least one strain is required");
  for (double s : strains)
    if (!(s > 1.0)) throw std::invalid_argument("strains must be > 1");
  if (schemes.empty()) throw std::invalid_argument("at least one scheme is required");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const int n_free = n_atoms - 2;
  for (int core : core_sizes)
    if (core < 2 || core % 2 != 0 || core > n_free)
      throw std::invalid_argument("core sizes must be even and within [2, n_free]");
}

std::vector<int> SweepConfig::resolved_core_sizes() const {
  if (!core_sizes.empty()) return core_sizes;
  std::vector<int> sizes;
  for (int core = 2; core <= n_atoms - 2; core += 2) sizes.push_back(core);
  return sizes;
}

RepatomSet scheme_indices(Scheme scheme, const ChainSystem& sys, int core_size) {
  switch (scheme) {
    case Scheme::localized: return localized_indices(sys, core_size);
    case Scheme::delocalized: return delocalized_indices(sys, core_size);
    case Scheme::delocalized_minimal: return delocalized_minimal_indices(sys, core_size);
  }
  throw std::invalid_argument("unknown scheme");
}

SaddleContext make_saddle_context(const ChainSystem& sys, SaddleMethod method) {
  SaddleContext ctx;
  switch (method) {
    case SaddleMethod::drag:
      ctx.saddle = find_saddle_drag(sys);
      break;
    case SaddleMethod::analytic:
      ctx.saddle = find_saddle_analytic(sys);
      break;
    case SaddleMethod::both: {
      const StationaryPoint dragged = find_saddle_drag(sys);
      ctx.saddle = find_saddle_analytic(sys);
      const double gap = (dragged.config.free_positions -
                          ctx.saddle.config.free_positions).cwiseAbs().maxCoeff();
      if (gap > 1e-8)
        throw ConvergenceError("drag and analytic saddles disagree by " +
                               std::to_string(gap));
      break;
    }
  }
  ctx.d_at = hessian(sys, ctx.saddle.config);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ctx.d_at);
  ctx.spectrum_at = solver.eigenvalues();
  auto [lambda, mode] = unstable_mode(ctx.d_at);
  ctx.lambda_at = lambda;
  ctx.u_at = mode;
  return ctx;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  config.validate();

  std::vector<Scheme> schemes = config.schemes;
  std::sort(schemes.begin(), schemes.end());
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());
  std::vector<double> strains = config.strains;
  std::sort(strains.begin(), strains.end());
  strains.erase(std::unique(strains.begin(), strains.end()), strains.end());
  std::vector<int> cores = config.resolved_core_sizes();
  std::sort(cores.begin(), cores.end());
  cores.erase(std::unique(cores.begin(), cores.end()), cores.end());

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRow> rows;
  rows.reserve(schemes.size() * strains.size() * cores.size());

  for (Scheme scheme : schemes) {
    for (double strain : strains) {
      const ChainSystem sys = ChainSystem::tensile(config.n_atoms, strain);
      std::optional<SaddleContext> ctx;
      std::string strain_error;
      try {
        ctx = make_saddle_context(sys, config.saddle_method);
      } catch (const std::exception& e) {
        strain_error = e.what();
      }

      for (int core : cores) {
        SweepRow row;
        row.scheme = to_string(scheme);
        row.strain = strain;
        row.core_size = core;
        row.n_repatoms = 0;
        row.lambda_at = row.lambda_cg = row.rel_rate_error = nan;
        row.overlap_term = row.longrange_term = row.identity_residual = nan;
        if (!strain_error.empty()) {
          row.error = strain_error;
          rows.push_back(row);
          continue;
        }
        try {
          const RepatomSet repatoms = scheme_indices(scheme, sys, core);
          row.n_repatoms = repatoms.size();
          const PartitionedHessian part = partition_hessian(ctx->d_at, repatoms);
          const CoarseHessian coarse = schur_complement(part);
          const ModePair pair =
              make_mode_pair(ctx->lambda_at, ctx->u_at, coarse.D_cg, repatoms);
          const ErrorBreakdown breakdown = error_decomposition(
              part, pair.u_at, pair.v_cg, pair.lambda_at, pair.lambda_cg);
          row.lambda_at = pair.lambda_at;
          row.lambda_cg = pair.lambda_cg;
          row.rel_rate_error = breakdown.rel_rate_error;
          row.overlap_term = breakdown.overlap;
          row.longrange_term = breakdown.longrange;
          row.identity_residual = breakdown.identity_residual;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double parse_double(const std::string& field) {
  return std::strtod(field.c_str(), nullptr);
}

}  // namespace

std::string csv_header() {
  return "scheme,strain,core_size,n_repatoms,lambda_at,lambda_cg,rel_rate_error,"
         "overlap_term,longrange_term,identity_residual";
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_header();
  out += '\n';
  for (const auto& row : rows) {
    out += row.scheme;
    out += ',';
    out += format_double(row.strain);
    out += ',';
    out += std::to_string(row.core_size);
    out += ',';
    out += std::to_string(row.n_repatoms);
    out += ',';
    out += format_double(row.lambda_at);
    out += ',';
    out += format_double(row.lambda_cg);
    out += ',';
    out += format_double(row.rel_rate_error);
    out += ',';
    out += format_double(row.overlap_term);
    out += ',';
    out += format_double(row.longrange_term);
    out += ',';
    out += format_double(row.identity_residual);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << to_csv(rows);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<SweepRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
  if (line != csv_header()) throw std::runtime_error("unexpected CSV header: " + line);

  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 10)
      throw std::runtime_error("malformed CSV row: " + line);
    SweepRow row;
    row.scheme = fields[0];
    row.strain = parse_double(fields[1]);
    row.core_size = std::atoi(fields[2].c_str());
    row.n_repatoms = std::atoi(fields[3].c_str());
    row.lambda_at = parse_double(fields[4]);
    row.lambda_cg = parse_double(fields[5]);
    row.rel_rate_error = parse_double(fields[6]);
    row.overlap_term = parse_double(fields[7]);
    row.longrange_term = parse_double(fields[8]);
    row.identity_residual = parse_double(fields[9]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> parse_csv_string(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

}  // namespace cgrate
