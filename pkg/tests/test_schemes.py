import numpy as np
import pytest

from conftest import ONE, SYM, _kernels_c, random_config
from fourway import _kernels_py, kernels
from fourway.core import FEAS_TOL, RateTuple, SchemeParams, SystemConfig, TrafficProfile
from fourway.schemes import SCHEME_IDS, get_scheme


def _random_table(rng, n_groups=3, n_params=7):
    member_start, group_start, k = [0], [0], 0
    for _ in range(n_groups):
        for _ in range(rng.integers(1, 4)):
            k += int(rng.integers(1, 5))
            member_start.append(k)
        group_start.append(len(member_start) - 1)
    coef = (rng.random((k, 4)) < 0.5).astype(float)
    bounds = rng.uniform(0, 3, (n_params, k))
    bounds[rng.random(bounds.shape) < 0.1] = 0.0
    return (np.ascontiguousarray(coef), np.ascontiguousarray(bounds),
            np.array(member_start, dtype=np.intp), np.array(group_start, dtype=np.intp))


KERNELS = ("group_headroom", "polytope_slack", "feasibility_map", "profiled_slack")


@pytest.fixture
def use_backend(kernel_impl, monkeypatch):
    for name in KERNELS:
        monkeypatch.setattr(kernels, name, getattr(kernel_impl, name))
    return kernel_impl


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if _kernels_c is not None:
        assert kernels.BACKEND == "cython"


@pytest.mark.skipif(_kernels_c is None, reason="compiled kernels not built")
def test_backends_agree(rng):
    for _ in range(200):
        coef, bounds, ms, gs = _random_table(rng)
        x = rng.uniform(0, 2, 4) * (rng.random(4) < 0.7)
        a = _kernels_py.group_headroom(x, coef, bounds, ms, gs)
        b = _kernels_c.group_headroom(x, coef, bounds, ms, gs)
        assert np.array_equal(a, b)
        assert np.array_equal(_kernels_py.polytope_slack(x, coef, bounds, ms, gs),
                              _kernels_c.polytope_slack(x, coef, bounds, ms, gs))
        tags = rng.integers(0, 3, len(gs) - 1).astype(np.intp)
        for u, v in zip(_kernels_py.profiled_slack(x, coef, bounds, ms, gs, tags),
                        _kernels_c.profiled_slack(x, coef, bounds, ms, gs, tags)):
            assert np.array_equal(u, v)
        r = np.linspace(0, 2, 9)
        assert np.array_equal(_kernels_py.feasibility_map(r, r, 1.3, 0.4, coef, bounds, ms, gs, 1e-12),
                              _kernels_c.feasibility_map(r, r, 1.3, 0.4, coef, bounds, ms, gs, 1e-12))


def test_headroom_semantics(kernel_impl):
    # one group, two members: {x0 <= 1}, {x0 + x1 <= 4, x1 <= 1}
    coef = np.array([[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 0, 0]], dtype=float)
    bounds = np.array([[1.0, 4.0, 1.0]])
    ms, gs = np.array([0, 1, 3], dtype=np.intp), np.array([0, 2], dtype=np.intp)
    h = kernel_impl.group_headroom(np.array([1.0, 1.0, 0, 0]), coef, bounds, ms, gs)
    assert h[0, 0] == pytest.approx(1.0)
    # unloaded rows never bind: the zero point has infinite headroom
    h0 = kernel_impl.group_headroom(np.zeros(4), coef, bounds, ms, gs)
    assert np.isinf(h0[0, 0])
    assert kernel_impl.polytope_slack(np.array([2.0, 0.5, 0, 0]), coef, bounds, ms, gs)[0] \
        == pytest.approx(0.6)


def test_unknown_scheme():
    with pytest.raises(ValueError, match="unknown scheme"):
        get_scheme("df3", SYM)


@pytest.mark.parametrize("name", ["af2", "df2"])
def test_kernel_slack_matches_predicate(name, rng, use_backend):
    for _ in range(40):
        cfg = random_config(rng, zero_prob=0.05)
        scheme = get_scheme(name, cfg)
        a, t = rng.uniform(0, 1, 2)
        p = SchemeParams(a, t)
        for _ in range(25):
            x = rng.uniform(0, 1.5, 4) * (rng.random(4) < 0.8)
            s = scheme.slack(x, a, t)[0]
            if abs(s) < 1e-9:
                continue
            assert (s >= -FEAS_TOL) == scheme.feasible(RateTuple(*x), p), (x, a, t, cfg)


@pytest.mark.parametrize("name", ["af4", "df4"])
def test_closed_form_slack_matches_predicate(name, rng):
    for _ in range(300):
        cfg = random_config(rng)
        scheme = get_scheme(name, cfg)
        x = rng.uniform(0, 1.5, 4)
        s = scheme.slack(x)[0]
        if abs(s) > 1e-9:
            assert (s >= 0) == scheme.feasible(RateTuple(*x))


def test_slack_is_scale_headroom():
    scheme = get_scheme("df4", SYM)
    x = np.array([1.0, 1.0, 0, 0])
    s = scheme.slack(x)[0]
    assert scheme.slack(x * (1 + s))[0] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name", ["af2", "df2"])
def test_bounds_monotone_in_alpha(name, rng):
    # the branch-and-bound search relies on every bound being monotone in alpha
    alpha = np.linspace(0, 1, 401)
    for _ in range(30):
        b = get_scheme(name, random_config(rng, zero_prob=0.1)).unscaled_bounds(alpha)
        d = np.diff(b, axis=0)
        assert np.all((d >= -1e-12).all(axis=0) | (d <= 1e-12).all(axis=0))


def test_profiled_tau_is_optimal(rng, use_backend):
    taus = np.linspace(0, 1, 2001)
    for _ in range(30):
        cfg = random_config(rng)
        scheme = get_scheme("df2", cfg)
        x = rng.uniform(0, 1.5, 4) * (rng.random(4) < 0.8)
        alpha = rng.uniform(0, 1, 5)
        prof, tau_star = scheme.profiled_slack(x, alpha)
        for a, s, t in zip(alpha, prof, tau_star):
            grid = scheme.slack(x, np.full_like(taus, a), taus)
            assert grid.max() <= s + 1e-9
            if np.isfinite(s):
                assert scheme.slack(x, a, t)[0] == pytest.approx(s, rel=1e-9, abs=1e-9)


def test_af2_profiled_is_plain_slack():
    scheme = get_scheme("af2", SYM)
    x = np.array([0.3, 0.3, 0.2, 0.2])
    alpha = np.linspace(0, 1, 11)
    prof, _ = scheme.profiled_slack(x, alpha)
    plain = np.array([scheme.slack(x, a, 0.5)[0] for a in alpha])
    assert np.allclose(prof, plain)


@pytest.mark.parametrize("name", ["af2", "df2"])
def test_feasibility_map_matches_predicate(name, use_backend):
    cfg = SystemConfig(g11=0.7, g22=1.3)
    scheme = get_scheme(name, cfg)
    prof = TrafficProfile(1.5, 0.5)
    r = np.linspace(0, 1.6, 17)
    alpha, tau = np.array([0.2, 0.6]), np.array([0.5, 0.35])
    got = scheme.feasibility_map(r, r, prof.theta1, prof.theta2, alpha, tau)
    for i, a in enumerate(r):
        for j, b in enumerate(r):
            x = RateTuple(a, 1.5 * a, b, 0.5 * b)
            want = any(scheme.feasible(x, SchemeParams(p, q)) for p, q in zip(alpha, tau))
            assert bool(got[i, j]) == want, (a, b)


@pytest.mark.parametrize("name", ["af4", "df4"])
def test_closed_form_map_bitwise(name):
    from fourway.af import af4_loads
    from fourway.df import df4_loads
    loads = {"af4": af4_loads, "df4": df4_loads}[name]
    scheme = get_scheme(name, SystemConfig(g12=0.4))
    r = np.linspace(0, 1.5, 41)
    got = scheme.feasibility_map(r, r, 1.0, 2.0)
    want = np.array([[loads(RateTuple(a, a, b, 2 * b), scheme.cfg).total <= 1 + FEAS_TOL
                      for b in r] for a in r])
    assert np.array_equal(got.astype(bool), want)


def test_all_ids_build():
    for name in SCHEME_IDS:
        s = get_scheme(name, SYM)
        assert s.name == name
        assert s.feasible(RateTuple(0, 0, 0, 0))
        assert s.slack(np.zeros(4))[0] >= 0 or np.isinf(s.slack(np.zeros(4))[0])


def test_profile_fixture_is_symmetric():
    assert (ONE.theta1, ONE.theta2) == (1.0, 1.0)


def test_environment_forces_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, FOURWAY_KERNELS="python")
    out = subprocess.run([sys.executable, "-c", "import fourway; print(fourway.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
