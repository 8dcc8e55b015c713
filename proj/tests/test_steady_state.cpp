#include <cmath>
#include <numbers>

#include "cqstat/errors.hpp"
#include "cqstat/photon_statistics.hpp"
#include "cqstat/steady_state.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cqstat;
using std::numbers::pi;

namespace {

void check_physical(const SteadyStateResult& r) {
  CHECK(r.residual < 1e-10);
  CHECK(std::abs(r.rho.trace() - 1.0) < 1e-12);
  CHECK(r.min_eigenvalue >= -1e-8);
  CHECK(is_hermitian(r.rho.matrix(), 0));
}

}  // namespace

TEST_CASE("undriven system relaxes to the vacuum") {
  SystemParams p;
  p.eta = 0;
  p.n_max = 6;
  const auto r = solve_steady_state(p);
  check_physical(r);
  Matrix vacuum = Matrix::Zero(p.dim(), p.dim());
  vacuum(0, 0) = 1;
  CHECK(max_abs(Matrix(r.rho.matrix() - vacuum)) < 1e-14);
}

TEST_CASE("giant bunching out of phase") {
  SystemParams p;
  p.g = 0.1;
  p.eta = 0.1;
  p.gamma = 1.0;
  p.phi_z = pi;
  const auto r = solve_steady_state(p);
  check_physical(r);
  CHECK(g2(r.rho) > 80);
}

TEST_CASE("singular system is reported") {
  SystemParams p;
  p.g = 0;
  p.gamma = 0;
  p.eta = 0.5;
  p.n_max = 3;
  CHECK_THROWS_AS(solve_steady_state(p), SingularSystemError);
}

TEST_CASE("solver matches RK4 on random points") {
  for (int trial = 0; trial < 2; ++trial) {
    SystemParams p;
    p.g = test::uniform(0.2, 2);
    p.eta = test::uniform(0.2, 2);
    p.gamma = test::uniform(0.5, 2);
    p.delta = test::uniform(0, 2);
    p.delta_a = test::uniform(0, 2);
    p.phi_z = test::uniform(0, 2 * pi);
    p.n_max = 5;
    const SuperOperator l = build_liouvillian(p);
    const auto lu = solve_steady_state(l, 2, p.n_max);
    check_physical(lu);
    const DensityMatrix rk =
        time_evolve(l, DensityMatrix::ground(2, p.n_max), 200.0, default_time_step(p));
    CHECK(trace_distance(rk.matrix(), lu.rho.matrix()) < 1e-6);
  }
}

TEST_CASE("time evolution") {
  SystemParams p;
  p.n_max = 2;
  const SuperOperator l = build_liouvillian(p);
  const DensityMatrix rho0 = DensityMatrix::ground(2, 2);
  CHECK(max_abs(Matrix(time_evolve(l, rho0, 0.0, 0.01).matrix() - rho0.matrix())) == 0);
  CHECK_THROWS_AS(time_evolve(l, rho0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(time_evolve(l, rho0, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(time_evolve(l, rho0, 50.0, 5.0), InstabilityError);

  SUBCASE("exponential decay of an excited atom") {
    SystemParams q;
    q.g = q.eta = 0;
    q.gamma = 0.7;
    q.n_max = 2;
    // |e g, 0>: atom index 2 * atom1 + atom2 = 2.
    Vector psi = Vector::Zero(q.dim());
    psi(2 * q.cavity_dim()) = 1;
    const DensityMatrix start = DensityMatrix::from_pure(psi, 2, 2);
    const SuperOperator lq = build_liouvillian(q);
    Matrix excited1 = Matrix::Zero(q.dim(), q.dim());
    for (Index n = 0; n < q.cavity_dim(); ++n) {
      excited1(2 * q.cavity_dim() + n, 2 * q.cavity_dim() + n) = 1;
      excited1(3 * q.cavity_dim() + n, 3 * q.cavity_dim() + n) = 1;
    }
    for (double t : {0.5, 1.0, 3.0}) {
      const DensityMatrix rt = time_evolve(lq, start, t, default_time_step(q));
      CHECK(std::abs(rt.expectation(excited1).real() - std::exp(-q.gamma * t)) < 1e-6);
    }
  }

  SUBCASE("long-time limit at the in-phase qnbd point") {
    SystemParams q;
    q.g = q.eta = 0.7;
    q.gamma = 1;
    q.n_max = 6;
    const SuperOperator lq = build_liouvillian(q);
    const auto lu = solve_steady_state(lq, 2, q.n_max);
    const DensityMatrix rk =
        time_evolve(lq, DensityMatrix::ground(2, q.n_max), 200.0, default_time_step(q));
    CHECK(trace_distance(rk.matrix(), lu.rho.matrix()) < 1e-6);
  }
}

TEST_CASE("cutoff escalation") {
  SUBCASE("weak driving needs a small cutoff") {
    SystemParams p;
    p.eta = 0.1;
    p.n_max = 4;
    const auto r = solve_converged(p);
    CHECK(r.converged);
    CHECK(r.n_max_used <= 10);
    const auto pmf = photon_distribution(r.rho);
    CHECK(pmf.back() < 1e-10);
  }

  SUBCASE("vacuum converges at the first comparison") {
    SystemParams p;
    p.eta = 0;
    p.n_max = 2;
    const auto r = solve_converged(p);
    CHECK(r.converged);
    CHECK(r.n_max_used == 3);
  }

  SUBCASE("superbunched corner needs more photons than the antibunched one") {
    SystemParams hot;
    hot.g = hot.eta = 10;
    hot.phi_z = pi;
    SystemParams cold;
    cold.g = cold.eta = 0.1;
    const auto rh = solve_converged(hot);
    const auto rc = solve_converged(cold);
    CHECK(rh.converged);
    CHECK(rc.converged);
    check_physical(rh);
    CHECK(rh.n_max_used > rc.n_max_used);
  }

  SUBCASE("cap reached") {
    SystemParams p;
    p.g = p.eta = 10;
    p.phi_z = pi;
    p.n_max = 8;
    ConvergenceOptions opt;
    opt.n_max_cap = 12;
    const auto r = solve_converged(p, opt);
    CHECK_FALSE(r.converged);
    CHECK(r.n_max_used == 12);
    CHECK_FALSE(r.diagnostics.empty());
  }

  SystemParams p;
  CHECK_THROWS_AS(solve_converged(p, -1.0), std::invalid_argument);
}
