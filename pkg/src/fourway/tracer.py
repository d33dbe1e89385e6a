"""Boundary tracing of (r1u, r2u) slices under fixed downlink-uplink ratios.

For a candidate rate pair the tracer asks whether *some* scheme parameter
makes the lifted 4-D tuple feasible: a coarse grid over the free parameters,
then branch-and-bound refinement of the promising parameter cells. An
outer bisection on the rate turns that test into a boundary point. The
traced points are finally closed under time sharing (upper convex hull).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (FEAS_TOL, RateTuple, RegionBoundary, SystemConfig,
                   TrafficProfile, capacity)
from .schemes import Scheme


class TracerError(RuntimeError):
    pass


@dataclass(frozen=True)
class TracerSettings:
    r1_grid_points: int = 201
    bisection_tol: float = 1e-6
    alpha_grid_points: int = 41
    refine_iterations: int = 12
    # points per refined cell; 5 points split a cell into 4 (a 4x shrink per round)
    refine_points: int = 5
    # surviving cells kept per refinement round, best upper bound first
    refine_cells: int = 8
    # rounds of extra columns bisected next to each hull vertex
    hull_refine_rounds: int = 10

    def __post_init__(self):
        if not self.bisection_tol > 0:
            raise ValueError("bisection_tol must be positive")
        for name in ("r1_grid_points", "alpha_grid_points", "refine_points"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be at least 2")
        if self.refine_iterations < 0 or self.refine_cells < 1 or self.hull_refine_rounds < 0:
            raise ValueError("refine_iterations and hull_refine_rounds must be >= 0, "
                             "refine_cells >= 1")


def lift_rates(r1u: float, r2u: float, profile: TrafficProfile) -> RateTuple:
    """Attach the downlink rates implied by the traffic ratios."""
    return RateTuple(r1u, profile.theta1 * r1u, r2u, profile.theta2 * r2u)


def rate_upper_bound(cfg: SystemConfig) -> float:
    """Sum of the four single-link capacities at the stronger endpoint power."""
    return (capacity(cfg.g11 * max(cfg.p1, cfg.pR1)) + capacity(cfg.g12 * max(cfg.pR1, cfg.pB))
            + capacity(cfg.g22 * max(cfg.pB, cfg.pR2)) + capacity(cfg.g21 * max(cfg.pR2, cfg.p2)))


class ParameterSearch:
    """Existence test over the superposition split for a fixed rate point.

    ``tau`` never needs a grid: :meth:`Scheme.profiled_slack` returns the
    best phase split for each ``alpha``. Over ``alpha`` every constraint
    bound is monotone, so the larger of a cell's two endpoint bounds caps
    the bound anywhere inside the cell. That gives an upper bound on the
    slack per cell; cells that cannot reach feasibility are pruned and the
    rest are split ``refine_iterations`` times.
    """

    def __init__(self, scheme: Scheme, settings: TracerSettings):
        self.scheme = scheme
        self.settings = settings
        self.searching = bool(scheme.param_axes)
        if self.searching:
            self.coarse = np.linspace(0.0, 1.0, settings.alpha_grid_points)
            self.coarse_bounds = scheme.unscaled_bounds(self.coarse)
            self.coarse_caps = np.maximum(self.coarse_bounds[:-1], self.coarse_bounds[1:])

    def best(self, x: np.ndarray) -> tuple[float, float, float]:
        """``(slack, alpha, tau)`` of the best point found; stops early once feasible."""
        if not self.searching:
            return float(self.scheme.slack(x)[0]), float("nan"), float("nan")
        s, taus = self.scheme.profiled_slack(x, None, self.coarse_bounds)
        i = int(np.argmax(s))
        best = (float(s[i]), float(self.coarse[i]), float(taus[i]))
        if best[0] >= -FEAS_TOL:
            return best
        cap, _ = self.scheme.profiled_slack(x, None, self.coarse_caps)
        lo, hi = self.coarse[:-1], self.coarse[1:]
        n = self.settings.refine_points
        for _ in range(self.settings.refine_iterations):
            keep = np.flatnonzero(cap >= -FEAS_TOL)
            if len(keep) == 0:
                break
            keep = keep[np.argsort(-cap[keep], kind="stable")[:self.settings.refine_cells]]
            # n points per surviving cell, split into n - 1 sub-cells
            frac = np.linspace(0.0, 1.0, n)
            pts = lo[keep, None] + (hi[keep] - lo[keep])[:, None] * frac
            bounds = self.scheme.unscaled_bounds(pts.ravel())
            s, taus = self.scheme.profiled_slack(x, None, bounds)
            i = int(np.argmax(s))
            if s[i] > best[0]:
                best = (float(s[i]), float(pts.ravel()[i]), float(taus[i]))
            if best[0] >= -FEAS_TOL:
                break
            b = bounds.reshape(len(keep), n, -1)
            caps = np.maximum(b[:, :-1], b[:, 1:]).reshape(-1, b.shape[-1])
            cap, _ = self.scheme.profiled_slack(x, None, np.ascontiguousarray(caps))
            lo, hi = pts[:, :-1].ravel(), pts[:, 1:].ravel()
        return best

    def feasible(self, x: np.ndarray) -> bool:
        return self.best(x)[0] >= -FEAS_TOL


def _bisect(test, hi: float, tol: float, lo: float | None = None) -> float:
    """Largest rate in ``[lo, hi]`` passing ``test``, to within ``tol``.

    Without ``lo`` the bracket starts at zero, which must pass. A given
    ``lo`` is trusted to pass.
    """
    if lo is None:
        lo = 0.0
        if not test(0.0):
            raise TracerError("scheme reports the zero-rate point infeasible")
    if test(hi):
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if test(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _lift(r1: float, r2: float, profile: TrafficProfile) -> np.ndarray:
    return np.array([r1, profile.theta1 * r1, r2, profile.theta2 * r2])


def max_rate_on_axis(scheme: Scheme, profile: TrafficProfile, settings: TracerSettings | None = None,
                     axis: int = 1, search: ParameterSearch | None = None) -> float:
    """Largest uplink rate of user ``axis`` while the other user is silent."""
    settings = settings or TracerSettings()
    search = search or ParameterSearch(scheme, settings)
    u = rate_upper_bound(scheme.cfg)
    if axis == 1:
        return _bisect(lambda r: search.feasible(_lift(r, 0.0, profile)), u, settings.bisection_tol)
    if axis == 2:
        return _bisect(lambda r: search.feasible(_lift(0.0, r, profile)), u, settings.bisection_tol)
    raise ValueError("axis must be 1 or 2")


def max_r2_given_r1(scheme: Scheme, r1: float, profile: TrafficProfile,
                    settings: TracerSettings, search: ParameterSearch,
                    upper: float | None = None, lower: float | None = None) -> float:
    """Largest ``r2u`` feasible together with ``r1u = r1``, searched in ``[lower, upper]``.

    ``lower`` defaults to 0; when given it must be known feasible.
    """
    if upper is None:
        upper = rate_upper_bound(scheme.cfg)
    return _bisect(lambda r: search.feasible(_lift(r1, r, profile)), upper,
                   settings.bisection_tol, lower)


def trace_boundary(scheme: Scheme, profile: TrafficProfile, settings: TracerSettings | None = None,
                   scenario: str = "", workers: int = 1) -> RegionBoundary:
    """Trace the upper-right boundary of the scheme's (r1u, r2u) slice.

    A uniform ``r1u`` grid is bisected column by column. The union over
    parameters can have sharp vertices between columns, so each of
    ``hull_refine_rounds`` rounds adds midpoint columns beside every current
    hull vertex. A new column is bracketed by its neighbours: the slice is
    down-closed, so the right neighbour's height is feasible and the left
    neighbour's height caps it. Columns are independent, so ``workers > 1``
    fans them out over threads without changing the result.
    """
    settings = settings or TracerSettings()
    tol = settings.bisection_tol
    search = ParameterSearch(scheme, settings)
    r1_max = max_rate_on_axis(scheme, profile, settings, 1, search)
    r2_max = max_rate_on_axis(scheme, profile, settings, 2, search)

    def column(job):
        r1, lower, upper = job
        if r1 == 0.0:
            return r2_max
        return max_r2_given_r1(scheme, r1, profile, settings, search, upper, lower)

    def run(jobs):
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(column, jobs))
        return [column(j) for j in jobs]

    r1 = np.linspace(0.0, r1_max, settings.r1_grid_points)
    # the r2u intercept caps every column
    r2 = np.array(run([(x, None, r2_max) for x in r1]))
    for _ in range(settings.hull_refine_rounds):
        picks = _promising_gaps(r1, r2, tol)
        if not picks:
            break
        jobs = [(x, r2[j + 1], min(r2[j] + tol, r2_max)) for j, x in picks]
        new = run(jobs)
        at = np.array([j + 1 for j, _ in picks])
        r1 = np.insert(r1, at, [x for _, x in picks])
        r2 = np.insert(r2, at, new)
    pts = convex_closure(np.column_stack([r1, r2]))
    return RegionBoundary(scheme=scheme.name, scenario=scenario, points=pts,
                          r1u_max=float(pts[-1, 0]), r2u_max=float(pts[0, 1]),
                          max_sum_rate=float(np.max(pts.sum(axis=1))))


def _line(x0, y0, x1, y1):
    # slope and intercept through two points; None when vertical or degenerate
    if x1 - x0 <= 0:
        return None
    m = (y1 - y0) / (x1 - x0)
    return m, y0 - m * x0


def _promising_gaps(r1: np.ndarray, r2: np.ndarray, tol: float) -> list[tuple[int, float]]:
    """Column gaps whose boundary could still rise above the current hull.

    Between columns ``j`` and ``j + 1`` the boundary is at most ``r2[j]``
    (it is nonincreasing) and, if locally concave, below the extensions of
    the neighbouring segments. Gaps where that cap clears the hull by more
    than ``tol`` are returned with the abscissa of the largest clearance.
    """
    hull = convex_closure(np.column_stack([r1, r2]))
    picks = []
    for j in range(len(r1) - 1):
        a, b = r1[j], r1[j + 1]
        if b - a <= 4 * tol:
            continue
        caps = [(0.0, r2[j])]
        for line in (_line(r1[j - 1], r2[j - 1], a, r2[j]) if j >= 1 else None,
                     _line(b, r2[j + 1], r1[j + 2], r2[j + 2]) if j + 2 < len(r1) else None):
            if line is not None:
                caps.append(line)
        # the cap is a min of lines, so its clearance peaks at a crossing or an end
        xs = [a, b] + [(c1 - c2) / (m2 - m1) for i, (m1, c1) in enumerate(caps)
                       for m2, c2 in caps[i + 1:] if m1 != m2]
        xs = np.clip(np.array(xs), a + 0.1 * (b - a), b - 0.1 * (b - a))
        cap = np.min([m * xs + c for m, c in caps], axis=0)
        gain = cap - np.interp(xs, hull[:, 0], hull[:, 1])
        k = int(np.argmax(gain))
        if gain[k] > tol:
            picks.append((j, float(xs[k])))
    return picks


def convex_closure(points) -> np.ndarray:
    """Upper-right convex hull of ``points`` together with their axis projections.

    Returns an ``(n, 2)`` array running from ``(0, max r2u)`` to
    ``(max r1u, 0)``. Collinear boundary points are kept; points strictly
    under the hull are dropped.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("convex_closure needs at least one point")
    if np.any(pts < 0):
        raise ValueError("rate points must be nonnegative")
    x_max, y_max = pts[:, 0].max(), pts[:, 1].max()
    pts = np.vstack([pts, [[0.0, y_max]]])
    # x ascending, y descending; then keep the highest point of each abscissa
    pts = pts[np.lexsort((-pts[:, 1], pts[:, 0]))]
    pts = pts[np.r_[True, np.diff(pts[:, 0]) > 0]]
    if pts[-1, 1] > 0:
        pts = np.vstack([pts, [[x_max, 0.0]]])
    eps = 1e-15 * max(x_max, y_max, 1.0) ** 2
    hull: list[np.ndarray] = []
    for p in pts:
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            # keep near-collinear points unless the new point dominates them
            if cross <= eps and a[1] >= p[1]:
                break
            hull.pop()
        hull.append(p)
    return np.array(hull)
