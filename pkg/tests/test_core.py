import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fourway.core import (ConfigError, RateTuple, RegionBoundary, SchemeParams,
                          SystemConfig, TrafficProfile, capacity, capacity_array,
                          is_convex_chain, ratio, ratio_array, validate_config)

snr = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)


@pytest.mark.parametrize("gamma,expected", [(0, 0.0), (1, 1.0), (3, 2.0), (10, math.log2(11))])
def test_capacity_values(gamma, expected):
    assert capacity(gamma) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("bad", [-1e-9, -1.0, math.inf, math.nan])
def test_capacity_rejects_bad_snr(bad):
    with pytest.raises(ValueError):
        capacity(bad)


def test_capacity_array_matches_scalar():
    g = np.array([0.0, 0.5, 3.0, 100.0])
    assert np.allclose(capacity_array(g), [capacity(x) for x in g], rtol=0, atol=1e-15)


@given(snr, snr)
def test_capacity_increasing_and_concave(a, b):
    a, b = min(a, b), max(a, b)
    if b - a > 1e-9 * max(1.0, b):
        assert capacity(a) < capacity(b)
    assert capacity(0.5 * (a + b)) >= 0.5 * (capacity(a) + capacity(b)) - 1e-12


def test_validate_accepts_symmetric_unchanged():
    cfg = SystemConfig()
    assert validate_config(cfg) == cfg


@pytest.mark.parametrize("field", SystemConfig.GAINS + SystemConfig.POWERS)
def test_validate_names_negative_field(field):
    with pytest.raises(ConfigError, match=field):
        validate_config(SystemConfig(**{field: -0.1}))


@pytest.mark.parametrize("nv", [0.0, -1.0, math.nan])
def test_validate_rejects_noise(nv):
    with pytest.raises(ConfigError, match="noise_var"):
        validate_config(SystemConfig(noise_var=nv))


def test_validate_rejects_non_finite():
    with pytest.raises(ConfigError, match="pB"):
        validate_config(SystemConfig(pB=math.inf))


def test_validate_normalises_noise():
    out = validate_config(SystemConfig(pB=20.0, noise_var=2.0))
    assert out.pB == 10.0 and out.noise_var == 1.0
    assert out.p1 == 5.0 and out.g12 == 1.0


@given(st.floats(0.01, 100), st.floats(0, 50), st.floats(0, 5))
def test_validate_idempotent(nv, p, g):
    once = validate_config(SystemConfig(g11=g, pR1=p, noise_var=nv))
    assert validate_config(once) == once


def test_rate_tuple_rejects_negative():
    with pytest.raises(ConfigError, match="r2d"):
        RateTuple(0, 0, 0, -1e-3)
    assert RateTuple.from_sequence([1, 2, 3, 4]).as_array().tolist() == [1, 2, 3, 4]


@pytest.mark.parametrize("theta", [0.0, -1.0, math.inf])
def test_profile_rejects_bad_ratio(theta):
    with pytest.raises(ConfigError):
        TrafficProfile(theta, 1.0)


@pytest.mark.parametrize("kw", [{"alpha": -0.1}, {"alpha": 1.1}, {"tau": 2.0}, {"tau": math.nan}])
def test_scheme_params_range(kw):
    with pytest.raises(ConfigError):
        SchemeParams(**kw)


def test_ratio_conventions():
    assert ratio(0.0, 0.0) == 0.0
    assert ratio(1.0, 0.0) == math.inf
    assert ratio(1.0, 4.0) == 0.25
    assert ratio_array([0.0, 1.0, 1.0], [0.0, 0.0, 4.0]).tolist() == [0.0, math.inf, 0.25]


def _boundary(pts):
    pts = np.asarray(pts, dtype=float)
    return RegionBoundary("x", "y", pts, pts[-1, 0], pts[0, 1], float(pts.sum(axis=1).max()))


def test_region_boundary_accepts_concave_chain():
    _boundary([[0, 1], [0.5, 0.9], [1, 0.5], [1.2, 0]]).check()
    # a final vertical drop is allowed
    _boundary([[0, 1], [0.5, 0.9], [1, 0.5], [1, 0]]).check()


@pytest.mark.parametrize("pts", [
    [[0, 1], [0.5, 0.4], [1, 0.3], [1.2, 0]],   # convex dent
    [[0.1, 1], [1, 0]],                          # misses r2u axis
    [[0, 1], [1, 0.2]],                          # misses r1u axis
    [[0, 1], [0.5, 1.1], [1, 0]],                # increasing r2u
    [[0, 1], [0.5, 0.8], [0.5, 0.5], [1, 0]],    # repeated interior abscissa
])
def test_region_boundary_rejects(pts):
    with pytest.raises(ValueError):
        _boundary(pts).check()


def test_convex_chain_straight_line_is_fine():
    assert is_convex_chain(np.array([[0, 2], [1, 1], [2, 0]]))
