"""Brute-force cross-check of traced boundaries.

:func:`sweep_region` marks feasibility on a uniform rate lattice, OR-ed over a
uniform (alpha, tau) lattice with no refinement and no profiling, and keeps
the highest feasible ``r2u`` of every column. :func:`compare_boundaries`
measures that frontier against a traced hull.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RegionBoundary, TrafficProfile
from .schemes import Scheme
from .tracer import rate_upper_bound


@dataclass(frozen=True)
class SweepReport:
    scheme: str
    rate_grid: int
    param_grid: int
    hausdorff_gap: float
    containment_violations: int
    max_violation: float

    @property
    def passed(self) -> bool:
        return self.containment_violations == 0


def _param_lattice(scheme: Scheme, param_grid: int):
    axis = np.linspace(0.0, 1.0, param_grid)
    if not scheme.param_axes:
        return np.array([0.5]), np.array([0.5])
    if scheme.name == "af2":
        # the two-phase AF bounds do not depend on tau
        return axis, np.full_like(axis, 0.5)
    a, t = np.meshgrid(axis, axis, indexing="ij")
    return a.ravel(), t.ravel()


def sweep_region(scheme: Scheme, profile: TrafficProfile, rate_grid: int = 201,
                 param_grid: int = 41, upper: float | None = None) -> np.ndarray:
    """Column-wise feasible frontier on a ``rate_grid``-square lattice over ``[0, upper]``.

    Returns an ``(m, 2)`` array of ``(r1u, max feasible r2u)``; columns with no
    feasible point at all are omitted.
    """
    if rate_grid < 2 or param_grid < 2:
        raise ValueError("rate_grid and param_grid must be at least 2")
    if upper is None:
        upper = rate_upper_bound(scheme.cfg)
    r = np.linspace(0.0, upper, rate_grid)
    alpha, tau = _param_lattice(scheme, param_grid)
    ok = scheme.feasibility_map(r, r, profile.theta1, profile.theta2, alpha, tau).astype(bool)
    cols = np.flatnonzero(ok.any(axis=1))
    # highest feasible index per column (not assuming down-closure of the map)
    top = ok.shape[1] - 1 - np.argmax(ok[cols, ::-1], axis=1)
    return np.column_stack([r[cols], r[top]])


def hull_height(boundary_points, x) -> np.ndarray:
    """Height of the region under a boundary chain at abscissae ``x``; ``-inf`` past its end."""
    pts = np.asarray(boundary_points, dtype=float)
    x = np.asarray(x, dtype=float)
    x_max = pts[-1, 0]
    top = pts[pts[:, 0] == x_max, 1].max()
    # drop the bottom of a vertical final edge so interp sees a function
    chain = pts[pts[:, 0] < x_max]
    chain = np.vstack([chain, [[x_max, top]]])
    h = np.interp(x, chain[:, 0], chain[:, 1])
    return np.where(x > x_max, -np.inf, h)


def vertical_gaps(points, boundary_points) -> tuple[np.ndarray, np.ndarray]:
    """Per point: distance below the boundary (>= 0) and excess above or beyond it (>= 0)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    bpts = np.asarray(boundary_points, dtype=float)
    h = hull_height(bpts, pts[:, 0])
    beyond = pts[:, 0] - bpts[-1, 0]
    with np.errstate(invalid="ignore"):
        excess = np.where(np.isinf(h), beyond, pts[:, 1] - h)
        below = np.where(np.isinf(h), 0.0, h - pts[:, 1])
    return np.maximum(below, 0.0), np.maximum(excess, 0.0)


def compare_boundaries(oracle_points, traced: RegionBoundary, tol: float,
                       rate_grid: int = 0, param_grid: int = 0) -> SweepReport:
    """Vertical comparison of oracle frontier points against a traced hull."""
    pts = np.asarray(oracle_points, dtype=float).reshape(-1, 2)
    if len(pts) == 0 or len(traced.points) == 0:
        raise ValueError("compare_boundaries needs nonempty inputs")
    below, excess = vertical_gaps(pts, traced.points)
    bad = excess > tol
    return SweepReport(scheme=traced.scheme, rate_grid=rate_grid, param_grid=param_grid,
                       hausdorff_gap=float(below.max()),
                       containment_violations=int(bad.sum()),
                       max_violation=float(excess.max()))
