// cqstat: steady-state photon statistics sweeps.
//
//   cqstat grid     --config configs/in_phase_map.conf --out results
//   cqstat phase    --g 0.1 --eta 0.1 --phi-steps 81
//   cqstat dist     --g 0.6 --eta 0.6 --format csv,json
//   cqstat validity --config configs/validity_map.conf --format svg
//
// Exit status: 0 success, 1 configuration error, 2 some points failed,
// 3 every point failed.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cqstat/errors.hpp"
#include "cqstat/export.hpp"
#include "cqstat/sweep.hpp"

namespace {

using namespace cqstat;

enum ExitCode { kOk = 0, kConfigError = 1, kPartialFailure = 2, kTotalFailure = 3 };

struct Overrides {
  std::string config_path;
  std::optional<std::string> g, kappa, gamma, eta, delta, delta_a, phi_z;
  std::optional<int> n_max, n_atoms, workers, phi_steps, steps;
  std::optional<double> rel_tol;
  std::optional<std::string> format;
  std::vector<std::string> axes;
  std::string out = ".";
  bool no_fit = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "Config file (key = value lines)");
  cmd->add_option("--g", o.g, "Maximum atom-cavity coupling");
  cmd->add_option("--kappa", o.kappa, "Cavity decay rate (other rates are then divided by it)");
  cmd->add_option("--gamma", o.gamma, "Spontaneous emission rate");
  cmd->add_option("--eta", o.eta, "Pump Rabi frequency");
  cmd->add_option("--delta", o.delta, "Cavity-laser detuning");
  cmd->add_option("--delta-a", o.delta_a, "Atom-laser detuning");
  cmd->add_option("--phi-z", o.phi_z, "Interatomic phase, e.g. 0.5pi");
  cmd->add_option("--n-max", o.n_max, "Starting Fock cutoff");
  cmd->add_option("--n-atoms", o.n_atoms, "Number of atoms (1 or 2)");
  cmd->add_option("--workers", o.workers, "Worker threads");
  cmd->add_option("--rel-tol", o.rel_tol, "Relative tolerance of the cutoff convergence check");
  cmd->add_option("--format", o.format, "Comma-separated output formats: csv,json,svg");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_flag("--quiet", o.quiet, "Only print errors");
}

SweepConfig build_config(const Overrides& o) {
  SweepConfig c;
  if (!o.config_path.empty()) c = load_config(o.config_path);
  // With --kappa the rate flags are absolute and are rescaled to kappa = 1.
  double unit = 1.0;
  if (o.kappa) {
    unit = parse_number(*o.kappa);
    if (!(unit > 0.0)) throw ConfigError("--kappa must be > 0");
  }
  auto set = [&](const char* name, const std::optional<std::string>& v, double scale) {
    if (v) c.base.set(name, parse_number(*v) / scale);
  };
  set("g", o.g, unit);
  set("gamma", o.gamma, unit);
  set("eta", o.eta, unit);
  set("delta", o.delta, unit);
  set("delta_a", o.delta_a, unit);
  set("phi_z", o.phi_z, 1.0);
  if (o.n_max) c.base.n_max = *o.n_max;
  if (o.n_atoms) c.base.n_atoms = *o.n_atoms;
  if (o.workers) c.workers = *o.workers;
  if (o.rel_tol) c.rel_tol = *o.rel_tol;
  if (o.format) c.outputs = parse_formats(*o.format);
  if (o.phi_steps) c.phi_steps = *o.phi_steps;
  if (o.steps) c.validity_steps = *o.steps;
  if (o.no_fit) c.qnbd_fit = false;
  if (!o.axes.empty()) {
    c.axes.clear();
    for (const auto& a : o.axes) c.axes.push_back(parse_axis(a));
  }
  c.validate();
  return c;
}

void report_paths(const std::vector<std::filesystem::path>& paths, bool quiet) {
  if (quiet) return;
  for (const auto& p : paths) std::cout << "wrote " << p.string() << '\n';
}

int grid_exit_code(const GridResult& r, bool quiet) {
  const std::size_t failed = r.failures();
  if (!quiet || failed) {
    std::cerr << r.kind << ": " << r.points.size() << " points, " << failed << " failed\n";
  }
  for (const auto& rec : r.points) {
    if (rec.failed()) std::cerr << "  point " << rec.error_class << ": " << rec.error_message << '\n';
  }
  if (failed == 0) return kOk;
  return failed == r.points.size() ? kTotalFailure : kPartialFailure;
}

int run_grid_command(const Overrides& o) {
  const SweepConfig c = build_config(o);
  if (c.axes.empty()) throw ConfigError("grid needs axis1 (and optionally axis2) in the config or --axis");
  const GridResult r = run_grid(c);
  report_paths(export_grid(r, o.out, "grid", c.outputs), o.quiet);
  return grid_exit_code(r, o.quiet);
}

int run_phase_command(const Overrides& o) {
  const SweepConfig c = build_config(o);
  const GridResult r = run_phase_profile(c.base, c.phi_steps, c);
  report_paths(export_grid(r, o.out, "phase", c.outputs), o.quiet);
  return grid_exit_code(r, o.quiet);
}

int run_dist_command(const Overrides& o) {
  SweepConfig c = build_config(o);
  std::vector<OutputFormat> formats;
  for (auto f : c.outputs) {
    if (f == OutputFormat::svg) {
      std::cerr << "dist: svg output is not available, skipped\n";
    } else {
      formats.push_back(f);
    }
  }
  try {
    const DistributionReport r = run_distribution_report(c.base, c.rel_tol);
    report_paths(export_distribution(r, o.out, "dist", formats), o.quiet);
    if (!o.quiet) {
      std::cout << "mean_n " << r.stats.mean_n << ", qnbd (s, p) = (" << r.qnbd.s << ", " << r.qnbd.p
                << "), fidelity " << r.fidelity_qnbd << '\n';
    }
    if (!r.converged) {
      std::cerr << "dist: cutoff did not converge\n";
      return kTotalFailure;
    }
    return kOk;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "dist: " << e.what() << '\n';
    return kTotalFailure;
  }
}

int run_validity_command(const Overrides& o) {
  const SweepConfig c = build_config(o);
  const ValidityMap m =
      run_validity_map(c.g2_min, c.g2_max, c.q_min, c.q_max, c.validity_steps, c.p_cr_threshold);
  report_paths(export_validity(m, o.out, "validity", c.outputs), o.quiet);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state photon statistics of two driven atoms in a lossy cavity"};
  app.require_subcommand(1);

  Overrides o;
  auto* grid = app.add_subcommand("grid", "Sweep one or two parameters over a grid");
  add_common(grid, o);
  grid->add_option("--axis", o.axes, "Sweep axis <param>:<min>:<max>:<steps>[:log], up to two");
  grid->add_flag("--no-fit", o.no_fit, "Skip the qnbd fit");

  auto* phase = app.add_subcommand("phase", "Scan the interatomic phase over [0, 2pi]");
  add_common(phase, o);
  phase->add_option("--phi-steps", o.phi_steps, "Number of phase samples");
  phase->add_flag("--no-fit", o.no_fit, "Skip the qnbd fit");

  auto* dist = app.add_subcommand("dist", "Photon distribution against coherent, thermal and qnbd");
  add_common(dist, o);

  auto* validity = app.add_subcommand("validity", "Critical-probability map over (g2, Q)");
  add_common(validity, o);
  validity->add_option("--steps", o.steps, "Samples per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*grid) return run_grid_command(o);
    if (*phase) return run_phase_command(o);
    if (*dist) return run_dist_command(o);
    return run_validity_command(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTotalFailure;
  }
}
