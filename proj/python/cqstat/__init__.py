"""Steady-state photon statistics of two coherently driven atoms in a lossy
cavity, with negative binomial fits of the photon distribution."""

from ._cqstat import *  # noqa: F401,F403
from ._cqstat import SystemParams, solve_converged, compute_statistics

__all__ = [name for name in dir() if not name.startswith("_")]


def statistics(rel_tol=1e-6, **params):
    """Converged steady state for keyword parameters, e.g. statistics(g=0.7, eta=0.7)."""
    return compute_statistics(solve_converged(SystemParams(**params), rel_tol).rho)
