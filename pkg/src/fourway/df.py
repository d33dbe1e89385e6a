"""Decode-and-forward rate regions.

The two-phase membership test is built from three pieces: the phase-1
multiple access at each relay (interference treated as noise, or all three
layers decoded) and the phase-2 relay broadcast, which looks like a
multiple-access channel at the BS. The four-phase reference has a closed
form in terms of per-phase loads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (FEAS_TOL, RateTuple, SchemeParams, SystemConfig, capacity,
                   check_unit, ratio)


@dataclass(frozen=True)
class DfFourPhaseLoads:
    k1: float
    k2: float
    k3: float
    k4: float

    @property
    def total(self) -> float:
        return self.k1 + self.k2 + self.k3 + self.k4


@dataclass(frozen=True)
class MaCornerPoints:
    """Successive-decoding corners of the phase-2 MA pentagon at the BS.

    ``point_a`` decodes relay 1 first (user 2 gets its single-user rate);
    ``point_b`` is the opposite order.
    """

    point_a: tuple[float, float]
    point_b: tuple[float, float]


def _le(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + FEAS_TOL


def _relay_view(rates: RateTuple, relay: int, alpha: float, cfg: SystemConfig):
    if relay == 1:
        return rates.r1u, rates.r1d, rates.r2d, alpha, cfg.g11 * cfg.p1, cfg.g12 * cfg.pB
    if relay == 2:
        return rates.r2u, rates.r2d, rates.r1d, 1.0 - alpha, cfg.g21 * cfg.p2, cfg.g22 * cfg.pB
    raise ValueError(f"relay index must be 1 or 2, got {relay!r}")


def df2_ma_treat_noise_member(rates: RateTuple, relay: int, alpha: float, tau: float,
                              cfg: SystemConfig) -> bool:
    """Relay decodes its own user's uplink and downlink, other layer as noise.

    Only ``(r_iu, r_id)`` of the relay's own user are constrained.
    """
    check_unit("alpha", alpha)
    check_unit("tau", tau)
    ru, rd, _, a, h, g = _relay_view(rates, relay, alpha, cfg)
    floor = (1 - a) * g + 1
    return (_le(ru, tau * capacity(h / floor))
            and _le(rd, tau * capacity(a * g / floor))
            and _le(ru + rd, tau * capacity((h + a * g) / floor)))


def df2_ma_decode_all_member(rates: RateTuple, relay: int, alpha: float, tau: float,
                             cfg: SystemConfig) -> bool:
    """Relay jointly decodes the uplink, its downlink layer and the other layer."""
    check_unit("alpha", alpha)
    check_unit("tau", tau)
    ru, rd, rjd, a, h, g = _relay_view(rates, relay, alpha, cfg)
    other = (1 - a) * g
    return (_le(ru, tau * capacity(h))
            and _le(rd, tau * capacity(a * g))
            and _le(rjd, tau * capacity(other))
            and _le(ru + rd, tau * capacity(h + a * g))
            and _le(ru + rjd, tau * capacity(h + other))
            and _le(rd + rjd, tau * capacity(g))
            and _le(ru + rd + rjd, tau * capacity(h + g)))


def df2_phase2_caps(cfg: SystemConfig) -> dict[str, float]:
    """Unscaled phase-2 capacities (multiply by ``1 - tau``)."""
    return {
        "r1d": capacity(cfg.g11 * cfg.pR1),
        "r2d": capacity(cfg.g21 * cfg.pR2),
        "r1u": capacity(cfg.g12 * cfg.pR1),
        "r2u": capacity(cfg.g22 * cfg.pR2),
        "sum_u": capacity(cfg.g12 * cfg.pR1 + cfg.g22 * cfg.pR2),
    }


def df2_phase2_member(rates: RateTuple, tau: float, cfg: SystemConfig) -> bool:
    check_unit("tau", tau)
    c = df2_phase2_caps(cfg)
    t = 1.0 - tau
    return (_le(rates.r1d, t * c["r1d"]) and _le(rates.r2d, t * c["r2d"])
            and _le(rates.r1u, t * c["r1u"]) and _le(rates.r2u, t * c["r2u"])
            and _le(rates.r1u + rates.r2u, t * c["sum_u"]))


def df2_relay_member(rates: RateTuple, relay: int, alpha: float, tau: float,
                     cfg: SystemConfig) -> bool:
    return (df2_ma_treat_noise_member(rates, relay, alpha, tau, cfg)
            or df2_ma_decode_all_member(rates, relay, alpha, tau, cfg))


def df2_feasible(rates: RateTuple, params: SchemeParams, cfg: SystemConfig) -> bool:
    """Membership in the two-phase DF set at fixed ``(alpha, tau)``.

    No convex closure is taken here; the tracer closes the union over
    parameters.
    """
    a, t = params.alpha, params.tau
    return (df2_relay_member(rates, 1, a, t, cfg)
            and df2_relay_member(rates, 2, a, t, cfg)
            and df2_phase2_member(rates, t, cfg))


def df4_phase_caps(cfg: SystemConfig) -> dict[str, float]:
    return {
        "1u": capacity(cfg.g11 * cfg.p1),
        "1d": capacity(cfg.g12 * cfg.pB),
        "1sum": capacity(cfg.g11 * cfg.p1 + cfg.g12 * cfg.pB),
        "R1d": capacity(cfg.g11 * cfg.pR1),
        "R1u": capacity(cfg.g12 * cfg.pR1),
        "2u": capacity(cfg.g21 * cfg.p2),
        "2d": capacity(cfg.g22 * cfg.pB),
        "2sum": capacity(cfg.g21 * cfg.p2 + cfg.g22 * cfg.pB),
        "R2d": capacity(cfg.g21 * cfg.pR2),
        "R2u": capacity(cfg.g22 * cfg.pR2),
    }


def df4_loads(rates: RateTuple, cfg: SystemConfig) -> DfFourPhaseLoads:
    c = df4_phase_caps(cfg)
    r = rates
    k1 = max(ratio(r.r1u, c["1u"]), ratio(r.r1d, c["1d"]), ratio(r.r1u + r.r1d, c["1sum"]))
    k2 = max(ratio(r.r1d, c["R1d"]), ratio(r.r1u, c["R1u"]))
    # k3 limits user 2's own sum rate, mirroring k1
    k3 = max(ratio(r.r2u, c["2u"]), ratio(r.r2d, c["2d"]), ratio(r.r2u + r.r2d, c["2sum"]))
    k4 = max(ratio(r.r2d, c["R2d"]), ratio(r.r2u, c["R2u"]))
    return DfFourPhaseLoads(k1, k2, k3, k4)


def df4_feasible(rates: RateTuple, cfg: SystemConfig) -> bool:
    return df4_loads(rates, cfg).total <= 1.0 + FEAS_TOL


def df4_feasible_sweep(rates: RateTuple, cfg: SystemConfig, grid_size: int = 101) -> bool:
    """Search phase durations on the simplex lattice ``tau_k = n_k / (grid_size - 1)``.

    Each phase's raw inequalities are evaluated at every lattice duration;
    the lattice points whose four indices sum to ``grid_size - 1`` are then
    enumerated through repeated boolean convolution.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    c = df4_phase_caps(cfg)
    r = rates
    t = np.linspace(0.0, 1.0, grid_size)

    def le(lhs, cap):
        return lhs <= t * cap + FEAS_TOL

    ok1 = le(r.r1u, c["1u"]) & le(r.r1d, c["1d"]) & le(r.r1u + r.r1d, c["1sum"])
    ok2 = le(r.r1d, c["R1d"]) & le(r.r1u, c["R1u"])
    ok3 = le(r.r2u, c["2u"]) & le(r.r2d, c["2d"]) & le(r.r2u + r.r2d, c["2sum"])
    ok4 = le(r.r2d, c["R2d"]) & le(r.r2u, c["R2u"])
    reach = ok1.astype(np.int64)
    for ok in (ok2, ok3, ok4):
        reach = (np.convolve(reach, ok.astype(np.int64)) > 0).astype(np.int64)
    return bool(reach[grid_size - 1])


def ma_corner_points(cfg: SystemConfig) -> MaCornerPoints:
    s1 = cfg.g12 * cfg.pR1
    s2 = cfg.g22 * cfg.pR2
    a = (capacity(s1 / (s2 + 1)), capacity(s2))
    b = (capacity(s1), capacity(s2 / (s1 + 1)))
    return MaCornerPoints(a, b)


def time_share_reconstruct(cfg: SystemConfig, tau: float, samples: int = 101) -> list[RateTuple]:
    """Phase-2 rate tuples reached by time sharing the corner codewords.

    Walks C -> A along the ``r2u`` cap, A -> B along the sum-rate face and
    B -> D down to the ``r1u`` axis, each with ``samples`` points. Downlink
    rates sit at the single-user relay-to-user capacities throughout. All
    rates carry the ``1 - tau`` phase duration.
    """
    check_unit("tau", tau)
    if samples < 2:
        raise ValueError("samples must be at least 2")
    corners = ma_corner_points(cfg)
    (a1, a2), (b1, b2) = corners.point_a, corners.point_b
    scale = 1.0 - tau
    d1 = scale * capacity(cfg.g11 * cfg.pR1)
    d2 = scale * capacity(cfg.g21 * cfg.pR2)
    t = np.linspace(1.0, 0.0, samples)
    segments = [
        (t[::-1] * a1, np.full(samples, a2)),           # C -> A
        (t * a1 + (1 - t) * b1, t * a2 + (1 - t) * b2),  # A -> B
        (np.full(samples, b1), t * b2),                  # B -> D
    ]
    out: list[RateTuple] = []
    for up1, up2 in segments:
        for u1, u2 in zip(up1, up2):
            pt = RateTuple(scale * float(u1), d1, scale * float(u2), d2)
            if not out or out[-1] != pt:  # segments share their end corners
                out.append(pt)
    return out
