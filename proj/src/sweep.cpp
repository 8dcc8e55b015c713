#include "cqstat/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <typeinfo>

#include "cqstat/errors.hpp"

namespace cqstat {

namespace {

std::string error_class_of(const std::exception& e) {
  if (dynamic_cast<const SingularSystemError*>(&e)) return "singular_system";
  if (dynamic_cast<const InvalidDistributionError*>(&e)) return "invalid_distribution";
  if (dynamic_cast<const UndefinedStatisticsError*>(&e)) return "undefined_statistics";
  if (dynamic_cast<const PoissonLimitError*>(&e)) return "poisson_limit";
  if (dynamic_cast<const InstabilityError*>(&e)) return "instability";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
  if (dynamic_cast<const std::bad_alloc*>(&e)) return "out_of_memory";
  return "runtime_error";
}

// Runs task(k) for k in [0, count) on `workers` threads; every task writes
// only its own slot.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
  const auto n_threads = static_cast<std::size_t>(std::max(1, workers));
  if (n_threads == 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(std::min(n_threads, count));
  for (std::size_t t = 0; t < std::min(n_threads, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) task(k);
    });
  }
}

std::vector<ContourSet> mean_contours(const GridResult& r) {
  std::vector<ContourSet> out;
  if (r.axis_values.size() != 2) return out;
  std::vector<double> field(r.points.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    if (r.points[k].stats) field[k] = r.points[k].stats->mean_n;
  }
  for (double level : r.config.contour_levels) {
    out.push_back({level, contour_lines(field, r.axis_values[0], r.axis_values[1], level)});
  }
  return out;
}

GridResult solve_points(GridResult result, const SweepConfig& config) {
  parallel_for(result.points.size(), config.workers, [&](std::size_t k) {
    auto& rec = result.points[k];
    PointRecord solved = evaluate_point(rec.params, config.rel_tol, config.qnbd_fit, config.class_tol);
    solved.axis_values = std::move(rec.axis_values);
    rec = std::move(solved);
  });
  result.contours = mean_contours(result);
  return result;
}

}  // namespace

std::size_t GridResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const PointRecord& p) { return p.failed(); }));
}

PointRecord evaluate_point(const SystemParams& params, double rel_tol, bool qnbd_fit, double class_tol) {
  PointRecord rec;
  rec.params = params;
  try {
    rec.params = params.validated();
    SteadyStateResult ss = solve_converged(rec.params, rel_tol);
    rec.n_max_used = ss.n_max_used;
    rec.residual = ss.residual;
    rec.converged = ss.converged;
    rec.solve_time = ss.solve_time;
    rec.warnings = ss.warnings;
    rec.stats = compute_statistics(ss.rho, class_tol);
    if (!ss.converged) {
      rec.error_class = "not_converged";
      rec.error_message = ss.diagnostics;
    }
    if (qnbd_fit && rec.stats->g2) {
      try {
        const QnbdParams fit = params_from_moments(rec.stats->mean_n, rec.stats->second_factorial_moment);
        rec.qnbd = fit;
        if (fit.regime != QnbdRegime::boundary) {
          const Pmf model = qnbd_pmf(fit, ss.rho.n_max());
          rec.fidelity_qnbd = fidelity(rec.stats->pmf, model.probs());
        }
      } catch (const PoissonLimitError& e) {
        rec.warnings.emplace_back(e.what());
      }
    }
  } catch (const std::exception& e) {
    rec.stats.reset();
    rec.qnbd.reset();
    rec.fidelity_qnbd.reset();
    rec.converged = false;
    rec.error_class = error_class_of(e);
    rec.error_message = e.what();
  }
  return rec;
}

GridResult run_grid(const SweepConfig& config) {
  config.validate();
  if (config.axes.empty()) throw ConfigError("grid needs at least one axis");
  GridResult result;
  result.kind = "grid";
  result.config = config;
  for (const auto& ax : config.axes) {
    result.axis_names.push_back(ax.name);
    result.axis_values.push_back(ax.values());
  }
  const auto& v1 = result.axis_values[0];
  const std::vector<double> single = {std::numeric_limits<double>::quiet_NaN()};
  const auto& v2 = result.axis_values.size() == 2 ? result.axis_values[1] : single;
  for (double x : v1) {
    for (double y : v2) {
      PointRecord rec;
      rec.params = config.base;
      rec.params.set(result.axis_names[0], x);
      rec.axis_values = {x};
      if (result.axis_values.size() == 2) {
        rec.params.set(result.axis_names[1], y);
        rec.axis_values.push_back(y);
      }
      result.points.push_back(std::move(rec));
    }
  }
  return solve_points(std::move(result), config);
}

GridResult run_phase_profile(const SystemParams& base, int phi_steps, const SweepConfig& options) {
  if (phi_steps < 8) throw ConfigError("phase profile needs phi_steps >= 8");
  SweepConfig config = options;
  config.base = base;
  config.phi_steps = phi_steps;
  config.axes = {SweepAxis{"phi_z", 0.0, 2.0 * std::numbers::pi, phi_steps, false}};
  GridResult result = run_grid(config);
  result.kind = "phase";
  return result;
}

double DistributionReport::max_deviation_qnbd() const {
  double m = 0.0;
  for (double d : deviation_qnbd) m = std::max(m, std::abs(d));
  return m;
}

DistributionReport run_distribution_report(const SystemParams& params, double rel_tol) {
  const SystemParams p = params.validated();
  const SteadyStateResult ss = solve_converged(p, rel_tol);
  PhotonStatistics stats = compute_statistics(ss.rho);
  if (!stats.g2) {
    throw UndefinedStatisticsError("distribution report: the steady state is the vacuum");
  }
  const int n_max = ss.rho.n_max();
  const QnbdParams fit = params_from_moments(stats.mean_n, stats.second_factorial_moment);
  Pmf system(stats.pmf);
  Pmf coherent = poisson_pmf(stats.mean_n, n_max);
  Pmf thermal = thermal_pmf(stats.mean_n, n_max);
  Pmf model = qnbd_pmf(fit, n_max);

  auto deviations = [&](const Pmf& other) {
    std::vector<double> d;
    for (std::size_t n = 0; n <= kDeviationPhotons; ++n) d.push_back(other[n] - system[n]);
    return d;
  };
  DistributionReport r{
      .params = p,
      .n_max_used = ss.n_max_used,
      .residual = ss.residual,
      .converged = ss.converged,
      .stats = std::move(stats),
      .qnbd = fit,
      .system = system,
      .coherent = coherent,
      .thermal = thermal,
      .qnbd_fit = model,
      .deviation_coherent = deviations(coherent),
      .deviation_thermal = deviations(thermal),
      .deviation_qnbd = deviations(model),
      .fidelity_coherent = fidelity(system, coherent),
      .fidelity_thermal = fidelity(system, thermal),
      .fidelity_qnbd = fidelity(system, model),
  };
  return r;
}

ValidityMap run_validity_map(double g2_min, double g2_max, double q_min, double q_max, int steps,
                             double p_cr_threshold) {
  if (!(0.0 < g2_min && g2_min < g2_max && g2_max < 1.0)) {
    throw ConfigError("validity map: g2 range must lie inside (0, 1)");
  }
  if (!(-1.0 < q_min && q_min < q_max && q_max < 0.0)) {
    throw ConfigError("validity map: Q range must lie inside (-1, 0)");
  }
  if (steps < 2) throw ConfigError("validity map: steps must be >= 2");
  if (!(p_cr_threshold > 0.0)) throw ConfigError("validity map: threshold must be > 0");

  ValidityMap map;
  map.p_cr_threshold = p_cr_threshold;
  map.g2_values = SweepAxis{"g2", g2_min, g2_max, steps, false}.values();
  map.q_values = SweepAxis{"q", q_min, q_max, steps, false}.values();
  std::vector<double> field;
  for (double g2 : map.g2_values) {
    for (double q : map.q_values) {
      ValidityReport rep = validity_check(g2, q, p_cr_threshold);
      field.push_back(rep.abs_p_cr);
      map.points.push_back({g2, q, rep});
    }
  }
  map.p_cr_contour = contour_lines(field, map.g2_values, map.q_values, p_cr_threshold);
  if (q_min <= -0.5 && -0.5 <= q_max) {
    map.q_limit_line.points = {{g2_min, -0.5}, {g2_max, -0.5}};
  }
  return map;
}

}  // namespace cqstat
