"""Scheme registry: vectorised slack evaluation for the tracer and oracle.

The two-phase schemes are compiled into constraint tables (constant row
coefficients, parameter-dependent bounds) evaluated by :mod:`fourway.kernels`.
The four-phase schemes have no free parameters and use their closed-form
loads directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import af, df, kernels
from .core import (FEAS_TOL, RateTuple, SchemeParams, SystemConfig,
                   capacity_array, ratio_array, validate_config)

SCHEME_IDS = ("af2", "af4", "df2", "df4")

# row coefficient vectors over (r1u, r1d, r2u, r2d)
U1, D1, U2, D2 = np.eye(4)


def _c(x):
    return capacity_array(x)


# time-scale tags for constraint groups
CONST, PHASE1, PHASE2 = 0, 1, 2


def _time_scale(tags: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """(P, K) factor 1, tau or 1 - tau per row."""
    tau = tau[:, None]
    return np.where(tags == PHASE1, tau, np.where(tags == PHASE2, 1.0 - tau, 1.0))


@dataclass
class Scheme:
    """A feasibility predicate bound to one system configuration.

    ``param_axes`` names the parameters the tracer searches on a grid. For
    the two-phase DF scheme ``tau`` is not among them: every constraint group
    scales with ``tau`` or ``1 - tau`` as a whole, so the best ``tau`` for a
    given ``alpha`` is available in closed form (:meth:`profiled_slack`).
    """

    name: str
    cfg: SystemConfig
    param_axes: tuple[str, ...]
    predicate: Callable[[RateTuple, SchemeParams], bool]
    coef: np.ndarray | None = None
    member_start: np.ndarray | None = None
    group_start: np.ndarray | None = None
    row_time: np.ndarray | None = None
    group_time: np.ndarray | None = None
    _unscaled: Callable | None = field(default=None, repr=False)
    _loads: Callable | None = field(default=None, repr=False)

    @property
    def closed_form(self) -> bool:
        return self._loads is not None

    def unscaled_bounds(self, alpha) -> np.ndarray:
        """Constraint right-hand sides before the phase-duration factor, one row per alpha."""
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        return np.ascontiguousarray(self._unscaled(alpha))

    def bounds(self, alpha, tau) -> np.ndarray:
        """Constraint right-hand sides, one row per ``(alpha[p], tau[p])``."""
        alpha, tau = np.broadcast_arrays(np.atleast_1d(np.asarray(alpha, dtype=float)),
                                         np.atleast_1d(np.asarray(tau, dtype=float)))
        out = self.unscaled_bounds(alpha) * _time_scale(self.row_time, tau)
        return np.ascontiguousarray(out)

    def loads(self, x) -> np.ndarray:
        """Closed-form load sums for an ``(n, 4)`` array of rate points."""
        return self._loads(np.atleast_2d(np.asarray(x, dtype=float)))

    def slack(self, x, alpha=0.5, tau=0.5, bounds=None) -> np.ndarray:
        """Relative slack of ``x`` at each ``(alpha, tau)``; feasible iff ``>= -FEAS_TOL``.

        ``slack + 1`` is the largest factor by which ``x`` can be scaled and
        stay feasible at that parameter point.
        """
        x = np.ascontiguousarray(x, dtype=float)
        if self.closed_form:
            load = self.loads(x)[0]
            return np.array([np.inf if load == 0 else 1.0 / load - 1.0])
        if bounds is None:
            bounds = self.bounds(alpha, tau)
        return kernels.polytope_slack(x, self.coef, bounds, self.member_start, self.group_start)

    def profiled_slack(self, x, alpha, unscaled=None) -> tuple[np.ndarray, np.ndarray]:
        """Slack at each ``alpha`` with ``tau`` set to its best value, and that ``tau``.

        With phase-1 headroom ``tau * a`` and phase-2 headroom ``(1 - tau) * c``
        the best split is ``tau = c / (a + c)``, giving headroom ``a c / (a + c)``.
        """
        x = np.ascontiguousarray(x, dtype=float)
        if unscaled is None:
            unscaled = self.unscaled_bounds(alpha)
        return kernels.profiled_slack(x, self.coef, unscaled, self.member_start,
                                      self.group_start, self.group_time)

    def feasible(self, rates: RateTuple, params: SchemeParams | None = None) -> bool:
        """Reference scalar predicate from the scheme module."""
        return self.predicate(rates, params or SchemeParams())

    def feasibility_map(self, r1, r2, theta1, theta2, alpha=0.5, tau=0.5) -> np.ndarray:
        """Lattice feasibility of the lifted points, OR-ed over the given parameters."""
        r1 = np.ascontiguousarray(r1, dtype=float)
        r2 = np.ascontiguousarray(r2, dtype=float)
        if self.closed_form:
            a, b = np.meshgrid(r1, r2, indexing="ij")
            x = np.stack([a, theta1 * a, b, theta2 * b], axis=-1).reshape(-1, 4)
            ok = self.loads(x) <= 1.0 + FEAS_TOL
            return ok.reshape(len(r1), len(r2)).astype(np.uint8)
        return kernels.feasibility_map(r1, r2, float(theta1), float(theta2), self.coef,
                                       self.bounds(alpha, tau), self.member_start,
                                       self.group_start, FEAS_TOL)


def _table(groups):
    """Flatten ``[(time_tag, [[(coef, bound_fn), ...], ...]), ...]`` into kernel arrays."""
    rows, fns, row_time, group_time = [], [], [], []
    member_start, group_start = [0], [0]
    for tag, members in groups:
        for member in members:
            for coef, fn in member:
                rows.append(coef)
                fns.append(fn)
                row_time.append(tag)
            member_start.append(len(rows))
        group_start.append(len(member_start) - 1)
        group_time.append(tag)
    coef = np.ascontiguousarray(np.array(rows, dtype=float))

    def unscaled(alpha):
        out = np.empty((len(alpha), len(fns)))
        for k, fn in enumerate(fns):
            out[:, k] = fn(alpha)
        return out

    return dict(coef=coef, member_start=np.array(member_start, dtype=np.intp),
                group_start=np.array(group_start, dtype=np.intp),
                row_time=np.array(row_time), group_time=np.array(group_time, dtype=np.intp),
                _unscaled=unscaled)


def _af2(cfg: SystemConfig) -> Scheme:
    snrs = af.af_equivalent_snrs(cfg)
    s1, s2, sp1, sp2 = snrs.s1, snrs.s2, snrs.sp1, snrs.sp2
    orders = {
        True: [(D1, lambda a: 0.5 * _c(s1 * a)),
               (D2, lambda a: 0.5 * _c(s2 * (1 - a) / (s2 * a + 1)))],
        False: [(D1, lambda a: 0.5 * _c(s1 * a / (s1 * (1 - a) + 1))),
                (D2, lambda a: 0.5 * _c(s2 * (1 - a)))],
    }
    downlink = [orders[o] for o in af.af2_orders(snrs)]
    uplink = [[(U1, lambda a: 0.5 * _c(sp1)),
               (U2, lambda a: 0.5 * _c(sp2)),
               (U1 + U2, lambda a: 0.5 * _c(sp1 + sp2))]]
    table = _table([(CONST, downlink), (CONST, uplink)])
    return Scheme("af2", cfg, ("alpha",), lambda r, p: af.af2_feasible(r, p.alpha, cfg), **table)


def _df2_relay(cfg: SystemConfig, relay: int):
    """Phase-1 constraint members at one relay, without the ``tau`` factor."""
    if relay == 1:
        own_u, own_d, other_d = U1, D1, D2
        h, g = cfg.g11 * cfg.p1, cfg.g12 * cfg.pB

        def share(a):
            return a
    else:
        own_u, own_d, other_d = U2, D2, D1
        h, g = cfg.g21 * cfg.p2, cfg.g22 * cfg.pB

        def share(a):
            return 1 - a

    def noise(a):
        return (1 - share(a)) * g + 1

    treat_noise = [
        (own_u, lambda a: _c(h / noise(a))),
        (own_d, lambda a: _c(share(a) * g / noise(a))),
        (own_u + own_d, lambda a: _c((h + share(a) * g) / noise(a))),
    ]
    decode_all = [
        (own_u, lambda a: _c(h)),
        (own_d, lambda a: _c(share(a) * g)),
        (other_d, lambda a: _c((1 - share(a)) * g)),
        (own_u + own_d, lambda a: _c(h + share(a) * g)),
        (own_u + other_d, lambda a: _c(h + (1 - share(a)) * g)),
        (own_d + other_d, lambda a: _c(g)),
        (own_u + own_d + other_d, lambda a: _c(h + g)),
    ]
    return [treat_noise, decode_all]


def _df2(cfg: SystemConfig) -> Scheme:
    c = df.df2_phase2_caps(cfg)
    phase2 = [[(D1, lambda a: c["r1d"]),
               (D2, lambda a: c["r2d"]),
               (U1, lambda a: c["r1u"]),
               (U2, lambda a: c["r2u"]),
               (U1 + U2, lambda a: c["sum_u"])]]
    table = _table([(PHASE1, _df2_relay(cfg, 1)), (PHASE1, _df2_relay(cfg, 2)),
                    (PHASE2, phase2)])
    return Scheme("df2", cfg, ("alpha",), lambda r, p: df.df2_feasible(r, p, cfg), **table)


def _af4(cfg: SystemConfig) -> Scheme:
    c1u, c1d, c2u, c2d = af.af4_capacities(cfg)

    def loads(x):
        l1 = np.maximum(ratio_array(2 * x[:, 0], c1u), ratio_array(2 * x[:, 1], c1d))
        l2 = np.maximum(ratio_array(2 * x[:, 2], c2u), ratio_array(2 * x[:, 3], c2d))
        return l1 + l2

    return Scheme("af4", cfg, (), lambda r, p: af.af4_feasible(r, cfg), _loads=loads)


def _df4(cfg: SystemConfig) -> Scheme:
    c = df.df4_phase_caps(cfg)

    def loads(x):
        u1, d1, u2, d2 = x.T
        k1 = np.maximum.reduce([ratio_array(u1, c["1u"]), ratio_array(d1, c["1d"]),
                                ratio_array(u1 + d1, c["1sum"])])
        k2 = np.maximum(ratio_array(d1, c["R1d"]), ratio_array(u1, c["R1u"]))
        k3 = np.maximum.reduce([ratio_array(u2, c["2u"]), ratio_array(d2, c["2d"]),
                                ratio_array(u2 + d2, c["2sum"])])
        k4 = np.maximum(ratio_array(d2, c["R2d"]), ratio_array(u2, c["R2u"]))
        return k1 + k2 + k3 + k4

    return Scheme("df4", cfg, (), lambda r, p: df.df4_feasible(r, cfg), _loads=loads)


_BUILDERS = {"af2": _af2, "af4": _af4, "df2": _df2, "df4": _df4}


def get_scheme(name: str, cfg: SystemConfig) -> Scheme:
    """Bind scheme ``name`` (one of :data:`SCHEME_IDS`) to a validated config."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; expected one of {SCHEME_IDS}") from None
    return builder(validate_config(cfg))
