// Acceptance gate: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cqstat/photon_statistics.hpp"
#include "cqstat/qnbd.hpp"
#include "cqstat/steady_state.hpp"
#include "cqstat/sweep.hpp"

using namespace cqstat;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* title;
  std::function<void(Outcome&)> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::mt19937_64 make_rng(unsigned seed) { return std::mt19937_64(seed); }

double draw(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Draws shared by criteria 1 and 2.
std::vector<SystemParams> solver_sample() {
  auto rng = make_rng(1);
  std::vector<SystemParams> out;
  for (int k = 0; k < 20; ++k) {
    SystemParams p;
    p.g = draw(rng, 0, 5);
    p.eta = draw(rng, 0, 5);
    p.gamma = draw(rng, 0, 5);
    p.delta = draw(rng, 0, 5);
    p.delta_a = draw(rng, 0, 5);
    p.phi_z = draw(rng, 0, 2 * pi);
    out.push_back(p);
  }
  return out;
}

const std::vector<SteadyStateResult>& solver_results() {
  static const std::vector<SteadyStateResult> results = [] {
    std::vector<SteadyStateResult> r;
    for (const auto& p : solver_sample()) r.push_back(solve_converged(p));
    return r;
  }();
  return results;
}

constexpr int kOracleCutoff = 6;

void solver_correctness(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sample = solver_sample();
  const auto& results = solver_results();
  double worst_res = 0, worst_trace = 0, worst_eig = 0, worst_td = 0;
  int unconverged = 0;
  for (const auto& r : results) {
    worst_res = std::max(worst_res, r.residual);
    worst_trace = std::max(worst_trace, std::abs(r.rho.trace() - 1.0));
    worst_eig = std::min(worst_eig, r.min_eigenvalue);
    unconverged += !r.converged;
  }
  for (std::size_t k = 0; k < 5; ++k) {
    SystemParams p = sample[k];
    p.n_max = kOracleCutoff;
    const SuperOperator l = build_liouvillian(p);
    const auto lu = solve_steady_state(l, 2, p.n_max);
    const DensityMatrix rk =
        time_evolve(l, DensityMatrix::ground(2, p.n_max), 200.0, default_time_step(p));
    worst_td = std::max(worst_td, trace_distance(rk.matrix(), lu.rho.matrix()));
  }
  const double elapsed = seconds_since(t0);
  o.detail << "max residual " << worst_res << ", max |tr-1| " << worst_trace << ", min eig "
           << worst_eig << ", max RK4 trace distance " << worst_td << ", unconverged " << unconverged
           << ", " << elapsed << " s";
  o.require(worst_res < 1e-10, "residual < 1e-10");
  o.require(worst_trace < 1e-12, "trace within 1e-12");
  o.require(worst_eig >= -1e-8, "min eigenvalue >= -1e-8");
  o.require(worst_td < 1e-6, "RK4 trace distance < 1e-6");
  o.require(elapsed < 120, "runtime < 2 min");
}

void witness_identity(Outcome& o) {
  double worst = 0;
  int undefined = 0;
  for (const auto& r : solver_results()) {
    const CavityMoments m = cavity_moments(r.rho);
    if (m.mean_n < kMeanFloor) {
      ++undefined;
      continue;
    }
    // Left: operator traces. Right: moments of the photon-number distribution.
    const double q_trace = mandel_q(r.rho);
    const Pmf pmf(photon_distribution(r.rho));
    const double rhs = pmf.mean() * (*pmf.g2() - 1.0);
    worst = std::max(worst, std::abs(q_trace - rhs));
  }
  o.detail << "max |Q - <n>(g2-1)| = " << worst << " over " << solver_results().size() - undefined
           << " points";
  o.require(worst <= 1e-10, "identity within 1e-10");
}

void giant_bunching(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SystemParams p;
  p.g = p.eta = 0.1;
  p.gamma = 1.0;
  p.phi_z = pi;
  const auto out_of_phase = compute_statistics(solve_converged(p).rho);
  p.phi_z = 0;
  const auto in_phase = compute_statistics(solve_converged(p).rho);
  const double elapsed = seconds_since(t0);
  o.detail << "g2(pi) = " << *out_of_phase.g2 << ", g2(0) = " << *in_phase.g2
           << ", Q(0) = " << *in_phase.q << ", " << elapsed << " s";
  o.require(*out_of_phase.g2 > 80, "g2(pi) > 80");
  o.require(*in_phase.g2 < 1, "g2(0) < 1");
  o.require(*in_phase.q < 0, "Q(0) < 0");
  o.require(elapsed < 30, "runtime < 30 s");
}

void nonclassicality_optimum(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig c;
  c.base.gamma = 1.0;
  c.axes = {parse_axis("g:0.5:2:21"), parse_axis("eta:0.5:2:21")};
  c.workers = 4;
  c.qnbd_fit = false;
  const auto grid = run_grid(c);
  const double elapsed = seconds_since(t0);
  double q_min = std::numeric_limits<double>::infinity();
  double g_at = 0, eta_at = 0;
  for (const auto& rec : grid.points) {
    if (rec.stats && rec.stats->q && *rec.stats->q < q_min) {
      q_min = *rec.stats->q;
      g_at = rec.axis_values[0];
      eta_at = rec.axis_values[1];
    }
  }
  o.detail << "min Q = " << q_min << " at (g, eta) = (" << g_at << ", " << eta_at << "), "
           << grid.failures() << " failures, " << elapsed << " s";
  o.require(q_min <= -0.09, "min Q <= -0.09");
  o.require(g_at > 0.3 && g_at < 3 && eta_at > 0.3 && eta_at < 3, "minimizer inside (0.3, 3)");
  o.require(elapsed < 600, "runtime < 10 min");
}

void out_of_phase_classicality(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig c;
  c.base.gamma = 1.0;
  c.base.phi_z = pi;
  c.axes = {parse_axis("g:0.1:10:11:log"), parse_axis("eta:0.1:10:11:log")};
  c.workers = 4;
  c.qnbd_fit = false;
  const auto grid = run_grid(c);
  int converged = 0, violations = 0;
  double g2_min = std::numeric_limits<double>::infinity();
  double q_min = std::numeric_limits<double>::infinity();
  for (const auto& rec : grid.points) {
    if (!rec.converged || !rec.stats || !rec.stats->g2) continue;
    ++converged;
    g2_min = std::min(g2_min, *rec.stats->g2);
    q_min = std::min(q_min, *rec.stats->q);
    violations += !(*rec.stats->g2 > 1.0 && *rec.stats->q > 0.0);
  }
  o.detail << converged << "/" << grid.points.size() << " converged, min g2 = " << g2_min
           << ", min Q = " << q_min << ", " << seconds_since(t0) << " s";
  o.require(violations == 0, "g2 > 1 and Q > 0 everywhere");
  o.require(converged > 0, "at least one converged point");
}

QnbdParams fitted(double g, double eta, double phi_z) {
  SystemParams p;
  p.g = g;
  p.eta = eta;
  p.gamma = 1.0;
  p.phi_z = phi_z;
  const CavityMoments m = cavity_moments(solve_converged(p).rho);
  return params_from_moments(m.mean_n, m.second_factorial_moment);
}

void qnbd_fit(Outcome& o) {
  const auto bunched = fitted(0.7, 0.7, pi);
  const auto antibunched = fitted(0.7, 0.7, 2 * pi);
  o.detail << "phi = pi: (s, p) = (" << bunched.s << ", " << bunched.p << "); phi = 2pi: (s, p) = ("
           << antibunched.s << ", " << antibunched.p << ")";
  o.require(std::abs(bunched.s - 2.83) <= 0.15, "|s - 2.83| <= 0.15");
  o.require(std::abs(bunched.p - 0.92) <= 0.02, "|p - 0.92| <= 0.02");
  o.require(std::abs(antibunched.s + 8.7) <= 0.45, "|s + 8.7| <= 0.45");
  o.require(std::abs(antibunched.p - 1.07) <= 0.02, "|p - 1.07| <= 0.02");
}

void distribution_agreement(Outcome& o) {
  struct Point {
    const char* name;
    double eta, g, s, p;
    bool sensitive;
  };
  const Point points[] = {{"thermal", 4.2, 0.8, 0.99, 0.58, false},
                          {"bunched", 1.5, 0.6, 2.44, 0.76, false},
                          {"coherent", 7.0, 7.0, -540, 1.00, true},
                          {"antibunched", 0.6, 0.6, -7.4, 1.07, false}};
  for (const auto& pt : points) {
    SystemParams p;
    p.eta = pt.eta;
    p.g = pt.g;
    p.gamma = 1.0;
    const auto r = run_distribution_report(p);
    o.detail << pt.name << ": F = " << r.fidelity_qnbd << " (root " << std::sqrt(r.fidelity_qnbd)
             << "), (s, p) = (" << r.qnbd.s << ", "
             << r.qnbd.p << ")";
    if (std::string(pt.name) == "antibunched") o.detail << ", max|dP| = " << r.max_deviation_qnbd();
    o.detail << "; ";
    o.require(r.fidelity_qnbd > 0.999, std::string(pt.name) + " fidelity > 0.999");
    if (pt.sensitive) {
      o.require(std::abs(r.qnbd.p - 1.0) <= 0.005, "coherent |p - 1| <= 0.005");
    } else {
      o.require(std::abs(r.qnbd.s - pt.s) <= 0.05 * std::abs(pt.s), std::string(pt.name) + " s within 5%");
      o.require(std::abs(r.qnbd.p - pt.p) <= 0.02, std::string(pt.name) + " p within 0.02");
    }
    if (std::string(pt.name) == "antibunched") {
      o.require(r.max_deviation_qnbd() < 5e-3, "antibunched max|dP| < 5e-3");
    }
  }
}

void appendix_pin(Outcome& o) {
  const double v = nbd_pmf_raw(-8.7, 1.07, 10);
  o.detail << "P(10) = " << v;
  o.require(std::abs(v / -1.85e-14 - 1.0) <= 0.03, "within 3% of -1.85e-14");
}

void limit_laws(Outcome& o) {
  auto rng = make_rng(9);
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    const double p = draw(rng, 0.2, 0.98);
    const Pmf a = qnbd_pmf(make_qnbd_params(1.0, p), 600);
    const Pmf b = thermal_pmf((1 - p) / p, 600);
    for (std::size_t n = 0; n < a.size(); ++n) worst = std::max(worst, std::abs(a[n] - b[n]));
  }
  const double s = 1e4;
  const double nbar = 2.0;
  const Pmf poisson_like = qnbd_pmf(make_qnbd_params(s, s / (s + nbar)), 80);
  const double dg2 = *poisson_like.g2() - 1.0;
  const double q = *poisson_like.mandel_q();
  o.detail << "max |nbd(1,p) - thermal| = " << worst << "; s = 1e4: g2 - 1 = " << dg2 << ", Q = " << q;
  o.require(worst <= 1e-12, "thermal limit to 1e-12");
  o.require(std::abs(dg2) < 2e-4, "|g2 - 1| < 2e-4");
  o.require(std::abs(q) < 4e-4, "|Q| < 4e-4");
}

void klyshko_consistency(Outcome& o) {
  auto rng = make_rng(10);
  double worst = 0;
  int checked = 0;
  bool pattern_ok = true;
  for (int k = 0; k < 20; ++k) {
    const bool nonclassical = k % 2 == 1;
    const double s = nonclassical ? -draw(rng, 0.3, 25.0) : draw(rng, 0.2, 20.0);
    const double p = nonclassical ? draw(rng, 1.01, 1.9) : draw(rng, 0.2, 0.95);
    const QnbdParams params = make_qnbd_params(s, p);
    const Pmf pmf = qnbd_pmf(params, 400);
    const auto kappa = klyshko(pmf.probs());
    // Entries whose three probabilities are all on the untruncated support.
    const int last = nonclassical ? *params.n_cut - 1 : static_cast<int>(kappa.size());
    for (int n = 1; n <= last; ++n) {
      const auto& v = kappa[static_cast<std::size_t>(n - 1)];
      if (!v) continue;
      worst = std::max(worst, std::abs(*v - klyshko_qnbd(s, n)));
      ++checked;
    }
    if (nonclassical) {
      for (int n = 1; n < 3 * static_cast<int>(std::abs(s)) + 5; ++n) {
        if (std::abs(s + n - 1.0) < 1e-12) continue;
        pattern_ok = pattern_ok && ((klyshko_qnbd(s, n) < 1.0) == (n < std::abs(s) + 1.0));
      }
      for (int n = 1; n <= static_cast<int>(kappa.size()); ++n) {
        const auto& v = kappa[static_cast<std::size_t>(n - 1)];
        // Entries with P(n) below the floor are undefined, not counterexamples.
        if (n < std::abs(s) + 1.0) {
          pattern_ok = pattern_ok && (!v || *v < 1.0);
        } else {
          pattern_ok = pattern_ok && !v;
        }
      }
    }
  }
  o.detail << "max |kappa_num - (s+n)/(s+n-1)| = " << worst << " over " << checked << " entries";
  o.require(worst <= 1e-8, "numeric matches analytic within 1e-8");
  o.require(pattern_ok, "kappa_n < 1 exactly for n < |s| + 1");
}

void symmetry_and_reduction(Outcome& o) {
  auto rng = make_rng(11);
  auto stats_of = [](const SystemParams& p) { return compute_statistics(solve_steady_state(p).rho); };
  double worst_mirror = 0;
  for (int k = 0; k < 10; ++k) {
    SystemParams p;
    p.g = draw(rng, 0.1, 3);
    p.eta = draw(rng, 0.1, 3);
    p.gamma = draw(rng, 0.1, 3);
    p.delta = draw(rng, -2, 2);
    p.delta_a = draw(rng, -2, 2);
    p.phi_z = draw(rng, 0, 2 * pi);
    p.n_max = 15;
    SystemParams mirror = p;
    mirror.phi_z = 2 * pi - p.phi_z;
    const auto a = stats_of(p);
    const auto b = stats_of(mirror);
    worst_mirror = std::max({worst_mirror, std::abs(a.mean_n - b.mean_n) / std::max(a.mean_n, 1e-3),
                             std::abs(*a.g2 - *b.g2) / *a.g2, std::abs(*a.q - *b.q) / std::max(std::abs(*a.q), 1e-3)});
  }
  double worst_single = 0;
  for (int k = 0; k < 5; ++k) {
    SystemParams p;
    p.g = draw(rng, 0.1, 3);
    p.eta = draw(rng, 0.1, 3);
    p.gamma = draw(rng, 0.1, 3);
    p.delta = draw(rng, -2, 2);
    p.delta_a = draw(rng, -2, 2);
    p.phi_z = pi / 2;
    p.n_max = 15;
    SystemParams one = p;
    one.n_atoms = 1;
    const auto a = stats_of(p);
    const auto b = stats_of(one);
    worst_single = std::max({worst_single, std::abs(a.mean_n - b.mean_n) / std::max(a.mean_n, 1e-3),
                             std::abs(*a.g2 - *b.g2) / *a.g2, std::abs(*a.q - *b.q) / std::max(std::abs(*a.q), 1e-3)});
  }
  o.detail << "max rel. difference phi vs 2pi - phi: " << worst_mirror
           << ", two-atom (pi/2) vs one-atom: " << worst_single;
  o.require(worst_mirror <= 1e-9, "mirror symmetry within 1e-9");
  o.require(worst_single <= 1e-8, "single-atom reduction within 1e-8");
}

void detuning_behavior(Outcome& o) {
  double g2_min = std::numeric_limits<double>::infinity();
  double eta_at = 0;
  for (int k = 0; k < 10; ++k) {
    SystemParams p;
    p.g = 1.0;
    p.gamma = 1.0;
    p.delta = p.delta_a = 1.0;
    p.eta = 0.5 + 0.5 * k;
    const auto s = compute_statistics(solve_converged(p).rho);
    o.detail << (k ? ", " : "g2(eta): ") << p.eta << ": " << *s.g2;
    if (*s.g2 < g2_min) {
      g2_min = *s.g2;
      eta_at = p.eta;
    }
  }
  o.detail << "; min g2 = " << g2_min << " at eta = " << eta_at;
  o.require(g2_min > 1.0, "all points bunched (g2 > 1)");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "solver correctness", solver_correctness},
      {2, "witness identity", witness_identity},
      {3, "giant bunching", giant_bunching},
      {4, "nonclassicality optimum", nonclassicality_optimum},
      {5, "out-of-phase classicality", out_of_phase_classicality},
      {6, "qnbd fit", qnbd_fit},
      {7, "distribution agreement", distribution_agreement},
      {8, "critical probability pin", appendix_pin},
      {9, "qnbd limit laws", limit_laws},
      {10, "klyshko consistency", klyshko_consistency},
      {11, "symmetry and reduction", symmetry_and_reduction},
      {12, "detuning behavior", detuning_behavior},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    Outcome o;
    o.detail.precision(6);
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("%s criterion %2d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
