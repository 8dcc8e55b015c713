#pragma once

// Sweep configuration and its plain-text file format.
//
// One `key = value` pair per line; `#` starts a comment. Rates are in units
// of kappa (kappa = 1) unless `units = absolute`, in which case kappa may be
// given and every rate is divided by it on load. Angles accept a trailing
// `pi`, e.g. `phi_z = 0.5pi`.
//
//   g, kappa, gamma, eta, delta, delta_a, phi_z, n_max, n_atoms
//   units          = kappa | absolute
//   axis1, axis2   = <param> <min> <max> <steps> [log]
//   contour_levels = 0.01, 0.1, 1
//   format         = csv, json, svg
//   workers        = 4
//   qnbd_fit       = true | false
//   rel_tol        = 1e-6
//   class_tol      = 0.01
//   phi_steps      = 41            (phase)
//   g2_range       = <min> <max>   (validity)
//   q_range        = <min> <max>   (validity)
//   steps          = 41            (validity)
//   p_cr_threshold = 0.001         (validity)

#include <string>
#include <string_view>
#include <vector>

#include "cqstat/system_model.hpp"

namespace cqstat {

struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
  bool log_spacing = false;

  [[nodiscard]] std::vector<double> values() const;
};

enum class OutputFormat { csv, json, svg };
std::string_view to_string(OutputFormat f);

struct SweepConfig {
  SystemParams base;
  std::vector<SweepAxis> axes;
  std::vector<double> contour_levels = {0.01, 0.1, 1.0};
  std::vector<OutputFormat> outputs = {OutputFormat::csv, OutputFormat::json};
  int workers = 1;
  bool qnbd_fit = true;
  double rel_tol = 1e-6;
  double class_tol = 0.01;
  int phi_steps = 41;
  double g2_min = 0.005, g2_max = 0.995;
  double q_min = -0.995, q_max = -0.005;
  int validity_steps = 41;
  double p_cr_threshold = 1e-3;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses the file format above into `config` (fields not mentioned keep
/// their current values). Throws ConfigError with the offending line.
void apply_config_text(SweepConfig& config, std::string_view text);
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::string& path);

/// `<param>:<min>:<max>:<steps>[:log]` or the space-separated file form.
SweepAxis parse_axis(std::string_view spec);

/// Number with an optional `pi` suffix ("pi", "2pi", "0.5pi", "1.5*pi").
double parse_number(std::string_view text);

std::vector<OutputFormat> parse_formats(std::string_view text);

}  // namespace cqstat
