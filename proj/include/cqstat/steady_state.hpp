#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cqstat/density_matrix.hpp"
#include "cqstat/operators.hpp"
#include "cqstat/system_model.hpp"

namespace cqstat {

struct SteadyStateResult {
  explicit SteadyStateResult(DensityMatrix state) : rho(std::move(state)) {}

  DensityMatrix rho;
  double residual = 0.0;  // max |L vec(rho)|
  int n_max_used = 0;
  bool converged = false;
  double solve_time = 0.0;  // seconds, wall clock
  double min_eigenvalue = 0.0;
  std::vector<std::string> warnings;
  std::string diagnostics;
};

/// Unit-trace null vector of L. L is restricted to Hermitian matrices (real
/// coordinates: diagonal, then Re/Im of the upper triangle), the rho(0,0) row
/// is replaced by the trace functional, the right-hand side is e_0, and the
/// system is solved by sparse LU. The result is renormalized to unit trace.
///
/// Throws SingularSystemError when the constrained matrix is singular (a
/// degenerate steady-state manifold) or the solve is numerically unusable.
SteadyStateResult solve_steady_state(const SuperOperator& liouvillian, int n_atoms, int n_max);
SteadyStateResult solve_steady_state(const SystemParams& params);

/// Fixed-step classic RK4 for d vec(rho)/dt = L vec(rho). The step is shrunk
/// to t_final / ceil(t_final / dt) so that the end point is hit exactly.
/// Stability needs dt * spectral_radius(L) below ~2.5; default_time_step()
/// gives 0.01 / (largest rate), which is safe for cutoffs up to a few hundred.
/// Throws InstabilityError when the trace drifts by more than 1e-6.
DensityMatrix time_evolve(const SuperOperator& liouvillian, const DensityMatrix& rho0,
                          double t_final, double dt);

double default_time_step(const SystemParams& params);

struct ConvergenceOptions {
  double rel_tol = 1e-6;
  double growth = 1.5;
  int n_max_cap = 200;
  double tail_tol = 1e-10;
  /// Observables below this magnitude are compared absolutely.
  double abs_floor = 1e-3;
};

/// Solves at params.n_max and at ceil(1.5 n_max), escalating until the mean
/// photon number, g2 and Q agree to rel_tol and p(n_max) < tail_tol. The
/// returned result is the larger solve. Reaching the cap returns a result
/// with converged = false and diagnostics filled in.
SteadyStateResult solve_converged(const SystemParams& params, const ConvergenceOptions& options);
SteadyStateResult solve_converged(const SystemParams& params, double rel_tol = 1e-6);

}  // namespace cqstat
