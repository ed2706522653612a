// Command-line driver: runs coarse-graining rate-error sweeps over repatom
// meshes of the 1-D fracture chain and writes one CSV row per mesh, or runs
// the verification suite.
//
// Exit codes: 0 success, 1 verification failure, 2 bad arguments or config,
// 3 I/O failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cgrate/sweep.hpp"
#include "cgrate/verify.hpp"

namespace {

struct Options {
  std::optional<int> atoms;
  std::vector<double> strains;
  std::vector<std::string> schemes;
  std::optional<int> core_min;
  std::optional<int> core_max;
  std::optional<int> core_step;
  std::optional<double> beta;
  std::optional<std::string> saddle;
  std::optional<std::string> out;
  std::optional<bool> verify;
};

void merge(Options& base, const Options& overlay) {
  if (overlay.atoms) base.atoms = overlay.atoms;
  if (!overlay.strains.empty()) base.strains = overlay.strains;
  if (!overlay.schemes.empty()) base.schemes = overlay.schemes;
  if (overlay.core_min) base.core_min = overlay.core_min;
  if (overlay.core_max) base.core_max = overlay.core_max;
  if (overlay.core_step) base.core_step = overlay.core_step;
  if (overlay.beta) base.beta = overlay.beta;
  if (overlay.saddle) base.saddle = overlay.saddle;
  if (overlay.out) base.out = overlay.out;
  if (overlay.verify) base.verify = overlay.verify;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

// Plain key = value file; '#' starts a comment; strain and scheme may repeat.
Options parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  Options opts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "atoms") opts.atoms = std::stoi(value);
      else if (key == "strain") opts.strains.push_back(std::stod(value));
      else if (key == "scheme") opts.schemes.push_back(value);
      else if (key == "core-min") opts.core_min = std::stoi(value);
      else if (key == "core-max") opts.core_max = std::stoi(value);
      else if (key == "core-step") opts.core_step = std::stoi(value);
      else if (key == "beta") opts.beta = std::stod(value);
      else if (key == "saddle") opts.saddle = value;
      else if (key == "out") opts.out = value;
      else if (key == "verify") opts.verify = (value == "true" || value == "1");
      else throw std::runtime_error("unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad value for '" + key + "'");
    }
  }
  return opts;
}

cgrate::SweepConfig build_sweep_config(const Options& opts) {
  cgrate::SweepConfig config;
  if (opts.atoms) config.n_atoms = *opts.atoms;
  if (!opts.strains.empty()) config.strains = opts.strains;
  if (!opts.schemes.empty()) {
    config.schemes.clear();
    for (const auto& name : opts.schemes) {
      const auto scheme = cgrate::scheme_from_string(name);
      if (!scheme) throw std::invalid_argument("unknown scheme: " + name);
      config.schemes.push_back(*scheme);
    }
  }
  if (opts.beta) config.beta = *opts.beta;
  if (opts.saddle) {
    const auto method = cgrate::saddle_method_from_string(*opts.saddle);
    if (!method) throw std::invalid_argument("unknown saddle method: " + *opts.saddle);
    config.saddle_method = *method;
  }
  if (opts.out) config.output_path = *opts.out;
  if (opts.verify) config.verify = *opts.verify;

  const int core_min = opts.core_min.value_or(2);
  const int core_max = opts.core_max.value_or(config.n_atoms - 2);
  const int core_step = opts.core_step.value_or(2);
  if (core_step <= 0) throw std::invalid_argument("core-step must be positive");
  config.core_sizes.clear();
  for (int core = core_min; core <= core_max; core += core_step)
    config.core_sizes.push_back(core);

  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTST rate error analysis for coarse-grained 1-D fracture chains"};

  Options cli;
  std::string config_path;
  bool verify_flag = false;
  app.add_option("--atoms", [&](const CLI::results_t& r) {
    cli.atoms = std::stoi(r[0]); return true;
  }, "Total atom count including the fixed endpoints (default 202)");
  app.add_option("--strain", cli.strains,
                 "Tensile strain; repeatable (default 1.02 and 1.035)");
  app.add_option("--scheme", cli.schemes,
                 "Repatom scheme: localized|delocalized|delocalized-minimal; repeatable");
  app.add_option("--core-min", [&](const CLI::results_t& r) {
    cli.core_min = std::stoi(r[0]); return true;
  }, "Smallest core size (default 2)");
  app.add_option("--core-max", [&](const CLI::results_t& r) {
    cli.core_max = std::stoi(r[0]); return true;
  }, "Largest core size (default: all free atoms)");
  app.add_option("--core-step", [&](const CLI::results_t& r) {
    cli.core_step = std::stoi(r[0]); return true;
  }, "Core size increment (default 2)");
  app.add_option("--beta", [&](const CLI::results_t& r) {
    cli.beta = std::stod(r[0]); return true;
  }, "Inverse temperature 1/(kB T) (default 1.0)");
  app.add_option("--saddle", [&](const CLI::results_t& r) {
    cli.saddle = r[0]; return true;
  }, "Saddle search: drag|analytic|both (default both)");
  app.add_option("--out", [&](const CLI::results_t& r) {
    cli.out = r[0]; return true;
  }, "Output CSV path (default sweep.csv)");
  app.add_option("--config", config_path, "Key = value configuration file; flags win");
  app.add_flag("--verify", verify_flag, "Run the verification suite instead of a sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (verify_flag) cli.verify = true;

  cgrate::SweepConfig config;
  try {
    Options merged;
    if (!config_path.empty()) merged = parse_config_file(config_path);
    merge(merged, cli);
    config = build_sweep_config(merged);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (config.verify) {
    try {
      const auto results = cgrate::run_verification(config);
      const bool ok = cgrate::print_report(results, std::cout);
      return ok ? 0 : 1;
    } catch (const std::exception& e) {
      std::cerr << "verification aborted: " << e.what() << '\n';
      return 1;
    }
  }

  std::vector<cgrate::SweepRow> rows;
  try {
    rows = cgrate::run_sweep(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  std::size_t failed = 0;
  for (const auto& row : rows) {
    if (!row.ok()) {
      ++failed;
      std::cerr << "row failed: scheme=" << row.scheme << " strain=" << row.strain
                << " core=" << row.core_size << ": " << row.error << '\n';
    }
  }

  try {
    cgrate::emit_csv(rows, config.output_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  std::cout << "wrote " << rows.size() << " rows (" << (rows.size() - failed)
            << " ok, " << failed << " failed) to " << config.output_path << '\n';
  return 0;
}
