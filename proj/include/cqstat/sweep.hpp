#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqstat/config.hpp"
#include "cqstat/contour.hpp"
#include "cqstat/photon_statistics.hpp"
#include "cqstat/qnbd.hpp"
#include "cqstat/steady_state.hpp"

namespace cqstat {

/// One solved grid point. A failed point keeps its parameters and carries
/// the error class and message instead of statistics.
struct PointRecord {
  std::vector<double> axis_values;
  SystemParams params;
  std::optional<PhotonStatistics> stats;
  std::optional<QnbdParams> qnbd;
  std::optional<double> fidelity_qnbd;
  int n_max_used = 0;
  double residual = 0.0;
  bool converged = false;
  double solve_time = 0.0;
  std::string error_class;  // empty on success
  std::string error_message;
  std::vector<std::string> warnings;

  [[nodiscard]] bool failed() const { return !error_class.empty(); }
};

struct ContourSet {
  double level;
  std::vector<Polyline> lines;
};

struct GridResult {
  std::string kind;  // "grid" or "phase"
  SweepConfig config;
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> axis_values;
  // Row-major, first axis slowest.
  std::vector<PointRecord> points;
  // Iso-lines of the mean photon number (two-axis grids only).
  std::vector<ContourSet> contours;

  [[nodiscard]] std::size_t failures() const;
};

/// Solves a single parameter point with solve_converged() and never throws
/// for physics/numerics failures; those are recorded in the result.
PointRecord evaluate_point(const SystemParams& params, double rel_tol, bool qnbd_fit,
                           double class_tol = kClassificationTol);

/// Solves every point of the 1-2 axis grid on `config.workers` threads.
/// Output order is fixed by the grid, never by completion order. Throws
/// ConfigError for an invalid config.
GridResult run_grid(const SweepConfig& config);

/// phi_z scan over [0, 2pi] with phi_steps samples; the other settings
/// (workers, rel_tol, qnbd_fit) come from `options`.
GridResult run_phase_profile(const SystemParams& base, int phi_steps,
                             const SweepConfig& options = {});

struct DistributionReport {
  SystemParams params;
  int n_max_used = 0;
  double residual = 0.0;
  bool converged = false;
  PhotonStatistics stats;
  QnbdParams qnbd;
  Pmf system;
  Pmf coherent;
  Pmf thermal;
  Pmf qnbd_fit;
  // Delta P(n) = P(n) - P_system(n) for n = 0..5
  std::vector<double> deviation_coherent;
  std::vector<double> deviation_thermal;
  std::vector<double> deviation_qnbd;
  double fidelity_coherent = 0.0;
  double fidelity_thermal = 0.0;
  double fidelity_qnbd = 0.0;

  [[nodiscard]] double max_deviation_qnbd() const;
};

inline constexpr int kDeviationPhotons = 5;

/// Compares the system photon distribution with same-mean coherent and
/// thermal light and the moment-fitted qnbd. Throws UndefinedStatisticsError
/// for the vacuum.
DistributionReport run_distribution_report(const SystemParams& params, double rel_tol = 1e-6);

struct ValidityPoint {
  double g2;
  double q;
  ValidityReport report;
};

struct ValidityMap {
  std::vector<double> g2_values;
  std::vector<double> q_values;
  // Row-major, g2 slowest.
  std::vector<ValidityPoint> points;
  double p_cr_threshold = kDefaultPcrThreshold;
  // |P_cr| = threshold iso-line and the Q = -0.5 line.
  std::vector<Polyline> p_cr_contour;
  Polyline q_limit_line;
};

/// |P_cr| and the implied mean photon number over a (g2, Q) grid inside
/// (0,1) x (-1,0). Throws ConfigError for ranges outside that square.
ValidityMap run_validity_map(double g2_min, double g2_max, double q_min, double q_max, int steps,
                             double p_cr_threshold = kDefaultPcrThreshold);

}  // namespace cqstat
