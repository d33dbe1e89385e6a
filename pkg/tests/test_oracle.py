import math

import numpy as np
import pytest

from conftest import ONE, SYM
from fourway.af import af4_loads
from fourway.core import RateTuple, RegionBoundary, SystemConfig
from fourway.df import df4_loads
from fourway.oracle import (compare_boundaries, hull_height, sweep_region,
                            vertical_gaps)
from fourway.schemes import get_scheme
from fourway.tracer import TracerSettings, rate_upper_bound, trace_boundary

AF4_AXIS = 0.5 * math.log2(131 / 31)


def _boundary(pts, name="t"):
    pts = np.asarray(pts, dtype=float)
    return RegionBoundary(name, "s", pts, pts[-1, 0], pts[0, 1], float(pts.sum(axis=1).max()))


def test_af4_frontier_hugs_line():
    scheme = get_scheme("af4", SYM)
    fr = sweep_region(scheme, ONE, 201)
    cell = rate_upper_bound(SYM) / 200
    gap = AF4_AXIS - fr.sum(axis=1)
    assert np.all(gap >= -1e-9) and np.all(gap < cell)
    # every lattice column up to the intercept has a feasible point
    assert fr[-1, 0] <= AF4_AXIS < fr[-1, 0] + cell


def test_disconnected_user_frontier():
    scheme = get_scheme("df2", SystemConfig(g11=0.0, g12=0.0))
    fr = sweep_region(scheme, ONE, 41, 5)
    assert np.all(fr[:, 0] == 0.0) and fr[0, 1] > 0


def test_two_point_lattice():
    # the lattice is {0, U}; only the origin is feasible
    fr = sweep_region(get_scheme("df4", SYM), ONE, 2, 2)
    assert fr.tolist() == [[0.0, 0.0]]
    with pytest.raises(ValueError):
        sweep_region(get_scheme("df4", SYM), ONE, 1, 2)


def test_custom_upper_bound():
    fr = sweep_region(get_scheme("df4", SYM), ONE, 101, 2, upper=1.5)
    assert fr[0, 1] == pytest.approx(1.335)


@pytest.mark.parametrize("name,loads", [("af4", af4_loads), ("df4", df4_loads)])
def test_closed_form_frontier_matches_direct(name, loads):
    scheme = get_scheme(name, SYM)
    fr = sweep_region(scheme, ONE, 61, 3, upper=1.5)
    r = np.linspace(0, 1.5, 61)
    for x, y in fr:
        ok = [loads(RateTuple(x, x, b, b), SYM).total <= 1 + 1e-12 for b in r]
        assert y == r[np.flatnonzero(ok)[-1]]


def test_compare_identical_and_shifted():
    pts = np.array([[0, 1.0], [0.5, 0.8], [1.0, 0.0]])
    rep = compare_boundaries(pts, _boundary(pts), 1e-6)
    assert rep.hausdorff_gap == 0 and rep.containment_violations == 0 and rep.passed
    low = compare_boundaries([[0.5, 0.75]], _boundary(pts), 1e-6)
    assert low.hausdorff_gap == pytest.approx(0.05) and low.containment_violations == 0
    high = compare_boundaries([[0.5, 0.8 + 2e-6]], _boundary(pts), 1e-6)
    assert high.containment_violations == 1 and high.max_violation == pytest.approx(2e-6)
    assert not high.passed
    beyond = compare_boundaries([[1.1, 0.0]], _boundary(pts), 1e-6)
    assert beyond.containment_violations == 1 and beyond.max_violation == pytest.approx(0.1)
    with pytest.raises(ValueError):
        compare_boundaries(np.empty((0, 2)), _boundary(pts), 1e-6)


def test_hull_height_with_vertical_edge():
    pts = np.array([[0, 1.0], [0.5, 0.8], [1.0, 0.6], [1.0, 0.0]])
    assert hull_height(pts, [1.0])[0] == pytest.approx(0.6)
    assert hull_height(pts, [0.75])[0] == pytest.approx(0.7)
    assert hull_height(pts, [1.2])[0] == -np.inf
    below, excess = vertical_gaps([[1.0, 0.3], [1.0, 0.7]], pts)
    assert below.tolist() == pytest.approx([0.3, 0.0]) and excess.tolist() == pytest.approx([0, 0.1])


@pytest.mark.parametrize("name", ["af2", "df2"])
def test_oracle_below_trace_on_tight_lattice(name):
    # a finer lattice over a tight box gives a sharper check than the default
    cfg = SystemConfig(g22=0.5)
    scheme = get_scheme(name, cfg)
    traced = trace_boundary(scheme, ONE, TracerSettings(r1_grid_points=51))
    upper = 1.05 * max(traced.r1u_max, traced.r2u_max)
    fr = sweep_region(scheme, ONE, 121, 21, upper=upper)
    rep = compare_boundaries(fr, traced, 2 * upper / 120)
    assert rep.passed, rep
    # the gap shrinks as the parameter lattice is refined
    finer = compare_boundaries(sweep_region(scheme, ONE, 121, 41, upper=upper), traced, 1)
    assert finer.hausdorff_gap <= rep.hausdorff_gap + 1e-12
