import math

import pytest

import cqstat


def test_params_keywords():
    p = cqstat.SystemParams(g=0.7, eta=0.5, n_max=12)
    assert p.g == 0.7
    assert p.n_max == 12
    assert p.dim == 4 * 13
    with pytest.raises(ValueError):
        cqstat.SystemParams(omega=1.0)


def test_giant_bunching():
    s = cqstat.statistics(g=0.1, eta=0.1, gamma=1.0, phi_z=math.pi)
    assert s.g2 > 80
    assert s.classification == cqstat.StatisticsClass.superbunched


def test_steady_state_matrix():
    r = cqstat.solve_steady_state(cqstat.SystemParams(g=0.7, eta=0.7, n_max=8))
    rho = r.rho.matrix
    assert rho.shape == (36, 36)
    assert abs(rho.trace() - 1) < 1e-12
    assert r.residual < 1e-10


def test_vacuum_statistics_undefined():
    r = cqstat.solve_steady_state(cqstat.SystemParams(eta=0.0, n_max=4))
    s = cqstat.compute_statistics(r.rho)
    assert s.g2 is None
    with pytest.raises(cqstat.UndefinedStatisticsError):
        cqstat.g2(r.rho)


def test_qnbd():
    assert cqstat.nbd_pmf_raw(-8.7, 1.07, 10) == pytest.approx(-1.85e-14, rel=0.03)
    pmf = cqstat.qnbd_pmf(-8.7, 1.07, 20)
    assert sum(pmf) == pytest.approx(1.0)
    assert all(v == 0 for v in pmf[10:])
    n_cr, p_cr = cqstat.critical_probability(-8.7, 1.07)
    assert n_cr == 10 and p_cr < 0
    fit = cqstat.params_from_witnesses(0.5, -0.1)
    assert fit.s == pytest.approx(-2.0)
    assert fit.regime == cqstat.QnbdRegime.nonclassical
    with pytest.raises(cqstat.PoissonLimitError):
        cqstat.params_from_moments(2.0, 4.0)


def test_grid_and_exports():
    r = cqstat.run_grid("axis1 = g 0.5 1 2\naxis2 = eta 0.5 1 2\n")
    assert len(r.points) == 4
    assert r.failures == 0
    assert r.to_csv().startswith("axis1,axis2,mean_n")
    assert '"kind": "grid"' in r.to_json()
    with pytest.raises(cqstat.ConfigError):
        cqstat.run_grid("axis1 = kappa 1 2 3\n")


def test_singular_point_reported():
    rec = cqstat.evaluate_point(cqstat.SystemParams(g=0, gamma=0, eta=0.5, n_max=3))
    assert rec.failed
    assert rec.error_class == "singular_system"


def test_distribution_report():
    r = cqstat.run_distribution_report(cqstat.SystemParams(g=0.6, eta=0.6))
    assert r.max_deviation_qnbd < 5e-3
    assert len(r.system) == len(r.qnbd_fit)
