#include "cqstat/steady_state.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>
#ifdef CQSTAT_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "cqstat/errors.hpp"
#include "cqstat/photon_statistics.hpp"

namespace cqstat {

namespace {

constexpr double kTraceWarning = 1e-8;
constexpr double kConstraintResidualLimit = 1e-6;
constexpr double kTraceDriftLimit = 1e-6;

using RealSparse = Eigen::SparseMatrix<double>;
#ifdef CQSTAT_HAVE_UMFPACK
using LuSolver = Eigen::UmfPackLU<RealSparse>;
#else
using LuSolver = Eigen::SparseLU<RealSparse, Eigen::COLAMDOrdering<int>>;
#endif

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Real coordinates of a Hermitian d x d matrix: rho(i,i) at i, then for each
// a < b the pair (Re rho(a,b), Im rho(a,b)) in row-major upper-triangle order.
Index offdiag_coordinate(Index a, Index b, Index d) {
  return d + 2 * (a * d - a * (a + 1) / 2 + (b - a - 1));
}

// Matrix of L restricted to Hermitian matrices, in the coordinates above.
RealSparse hermitian_restriction(const SparseMatrix& l, Index d) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(l.nonZeros()) * 2);
  auto emit = [&](Index col, Index vec_row, Complex v) {
    const Index a = vec_row % d;
    const Index b = vec_row / d;
    if (a == b) {
      trip.emplace_back(a, col, v.real());
    } else if (a < b) {
      const Index k = offdiag_coordinate(a, b, d);
      trip.emplace_back(k, col, v.real());
      trip.emplace_back(k + 1, col, v.imag());
    }
  };
  const Complex i_unit(0.0, 1.0);
  for (Index i = 0; i < d; ++i) {
    for (SparseMatrix::InnerIterator it(l, i + d * i); it; ++it) emit(i, it.row(), it.value());
  }
  // Basis elements |a><b| + |b><a| and i|a><b| - i|b><a|.
  for (Index a = 0; a < d; ++a) {
    for (Index b = a + 1; b < d; ++b) {
      const Index k = offdiag_coordinate(a, b, d);
      for (SparseMatrix::InnerIterator it(l, a + d * b); it; ++it) {
        emit(k, it.row(), it.value());
        emit(k + 1, it.row(), i_unit * it.value());
      }
      for (SparseMatrix::InnerIterator it(l, b + d * a); it; ++it) {
        emit(k, it.row(), it.value());
        emit(k + 1, it.row(), -i_unit * it.value());
      }
    }
  }
  RealSparse out(d * d, d * d);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Matrix from_hermitian_coordinates(const Eigen::VectorXd& x, Index d) {
  Matrix rho(d, d);
  for (Index a = 0; a < d; ++a) {
    rho(a, a) = x(a);
    for (Index b = a + 1; b < d; ++b) {
      const Index k = offdiag_coordinate(a, b, d);
      rho(a, b) = Complex(x(k), x(k + 1));
      rho(b, a) = std::conj(rho(a, b));
    }
  }
  return rho;
}

}  // namespace

SteadyStateResult solve_steady_state(const SuperOperator& liouvillian, int n_atoms, int n_max) {
  const auto start = std::chrono::steady_clock::now();
  const Index d = liouvillian.dim();
  if (d * d != liouvillian.matrix.rows() || liouvillian.matrix.rows() != liouvillian.matrix.cols()) {
    throw std::invalid_argument("solve_steady_state: Liouvillian is not D^2 x D^2");
  }

  // Row 0 is Re rho(0,0); swap it for the trace functional.
  RealSparse constrained = hermitian_restriction(liouvillian.matrix, d);
  constrained.prune([](Index row, Index, double) { return row != 0; });
  std::vector<Eigen::Triplet<double>> trace_row;
  trace_row.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) trace_row.emplace_back(0, i, 1.0);
  RealSparse trace_part(d * d, d * d);
  trace_part.setFromTriplets(trace_row.begin(), trace_row.end());
  constrained += trace_part;
  constrained.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d * d);
  rhs(0) = 1.0;

  LuSolver lu;
  lu.compute(constrained);
  if (lu.info() != Eigen::Success) {
    throw SingularSystemError("steady state is not unique: sparse LU factorization failed");
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw SingularSystemError("steady-state solve failed");
  }
  const Eigen::VectorXd r = constrained * x - rhs;
  const double constraint_residual = r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
  if (!(constraint_residual <= kConstraintResidualLimit)) {
    std::ostringstream msg;
    msg << "steady-state system is numerically singular (constraint residual "
        << constraint_residual << ")";
    throw SingularSystemError(msg.str());
  }

  SteadyStateResult result(DensityMatrix::ground(n_atoms, n_max));
  Matrix rho = from_hermitian_coordinates(x, d);
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex(1.0)) > kTraceWarning) {
    std::ostringstream msg;
    msg << "raw steady-state trace " << tr.real() << " renormalized";
    result.warnings.push_back(msg.str());
  }
  rho /= tr.real();

  result.residual = max_abs(Vector(liouvillian.matrix * vectorize(rho)));
  result.min_eigenvalue = min_eigenvalue(rho);
  result.rho = DensityMatrix(std::move(rho), n_atoms, n_max);
  result.n_max_used = n_max;
  result.converged = true;
  result.solve_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SteadyStateResult solve_steady_state(const SystemParams& params) {
  const SystemParams p = params.validated();
  return solve_steady_state(build_liouvillian(p), p.n_atoms, p.n_max);
}

DensityMatrix time_evolve(const SuperOperator& liouvillian, const DensityMatrix& rho0,
                          double t_final, double dt) {
  if (!(t_final >= 0.0)) throw std::invalid_argument("time_evolve: t_final must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("time_evolve: dt must be > 0");
  if (liouvillian.matrix.rows() != rho0.dim() * rho0.dim()) {
    throw std::invalid_argument("time_evolve: Liouvillian does not match the state dimension");
  }
  if (t_final == 0.0) return rho0;

  const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-12));
  const double h = t_final / static_cast<double>(steps);
  const Eigen::SparseMatrix<Complex, Eigen::RowMajor> l = liouvillian.matrix;
  const Index d = rho0.dim();

  auto trace_of = [d](const Vector& v) {
    Complex t = 0.0;
    for (Index i = 0; i < d; ++i) t += v(i + d * i);
    return t;
  };

  Vector y = vectorize(rho0.matrix());
  const Complex trace0 = trace_of(y);
  Vector k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  for (long long step = 0; step < steps; ++step) {
    k1.noalias() = l * y;
    tmp.noalias() = y + (0.5 * h) * k1;
    k2.noalias() = l * tmp;
    tmp.noalias() = y + (0.5 * h) * k2;
    k3.noalias() = l * tmp;
    tmp.noalias() = y + h * k3;
    k4.noalias() = l * tmp;
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Complex tr = trace_of(y);
    if (!std::isfinite(tr.real()) || std::abs(tr - trace0) > kTraceDriftLimit) {
      std::ostringstream msg;
      msg << "RK4 trace drift at t = " << h * static_cast<double>(step + 1)
          << " (step size " << h << " too large?)";
      throw InstabilityError(msg.str());
    }
  }
  return DensityMatrix(unvectorize(y), rho0.n_atoms(), rho0.n_max());
}

double default_time_step(const SystemParams& params) {
  const double rate = std::max({params.kappa, params.gamma, params.g, params.eta,
                                std::abs(params.delta), std::abs(params.delta_a)});
  return 0.01 / rate;
}

namespace {

struct Observables {
  double mean_n;
  std::optional<double> g2;
  std::optional<double> q;
  double tail;
};

Observables observe(const DensityMatrix& rho) {
  const CavityMoments m = cavity_moments(rho);
  Observables o{m.mean_n, std::nullopt, std::nullopt, 0.0};
  if (m.mean_n >= kMeanFloor) {
    o.g2 = m.second_factorial_moment / (m.mean_n * m.mean_n);
    o.q = (m.second_factorial_moment - m.mean_n * m.mean_n) / m.mean_n;
  }
  const DensityMatrix rc = reduced_cavity_state(rho);
  o.tail = std::abs(rc.matrix()(rc.cavity_dim() - 1, rc.cavity_dim() - 1).real());
  return o;
}

bool close(double a, double b, const ConvergenceOptions& opt) {
  const double scale = std::max({std::abs(a), std::abs(b), opt.abs_floor});
  return std::abs(a - b) <= opt.rel_tol * scale;
}

bool agree(const Observables& lo, const Observables& hi, const ConvergenceOptions& opt) {
  if (!close(lo.mean_n, hi.mean_n, opt)) return false;
  if (lo.g2.has_value() != hi.g2.has_value()) return false;
  if (lo.g2 && !(close(*lo.g2, *hi.g2, opt) && close(*lo.q, *hi.q, opt))) return false;
  return true;
}

}  // namespace

SteadyStateResult solve_converged(const SystemParams& params, const ConvergenceOptions& options) {
  if (!(options.rel_tol > 0.0)) throw std::invalid_argument("solve_converged: rel_tol must be > 0");
  if (!(options.growth > 1.0)) throw std::invalid_argument("solve_converged: growth must be > 1");
  SystemParams p = params.validated();
  p.n_max = std::min(p.n_max, options.n_max_cap);
  if (p.n_max >= options.n_max_cap) {
    throw std::invalid_argument("solve_converged: starting cutoff must be below the cap");
  }

  double elapsed = 0.0;
  SteadyStateResult previous = solve_steady_state(p);
  elapsed += previous.solve_time;
  Observables prev_obs = observe(previous.rho);
  std::ostringstream history;
  history << "n_max=" << p.n_max << ": mean_n=" << prev_obs.mean_n;

  while (true) {
    const int next =
        std::min(options.n_max_cap,
                 std::max(p.n_max + 1, static_cast<int>(std::ceil(options.growth * p.n_max - 1e-9))));
    p.n_max = next;
    SteadyStateResult current = solve_steady_state(p);
    elapsed += current.solve_time;
    const Observables obs = observe(current.rho);
    history << "; n_max=" << next << ": mean_n=" << obs.mean_n;
    if (obs.g2) history << " g2=" << *obs.g2 << " Q=" << *obs.q;
    history << " tail=" << obs.tail;

    const bool ok = agree(prev_obs, obs, options) && obs.tail < options.tail_tol;
    if (ok || next >= options.n_max_cap) {
      current.converged = ok;
      current.n_max_used = next;
      current.solve_time = elapsed;
      if (!ok) {
        current.diagnostics = "cutoff cap " + std::to_string(options.n_max_cap) +
                              " reached without convergence: " + history.str();
      }
      return current;
    }
    prev_obs = obs;
  }
}

SteadyStateResult solve_converged(const SystemParams& params, double rel_tol) {
  ConvergenceOptions options;
  options.rel_tol = rel_tol;
  return solve_converged(params, options);
}

}  // namespace cqstat
