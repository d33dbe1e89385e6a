"""Amplify-and-forward rate regions for the two-phase and four-phase schemes."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (FEAS_TOL, RateTuple, SystemConfig, capacity, check_unit,
                   ratio)


@dataclass(frozen=True)
class AfEquivalentSnrs:
    """Equivalent SNRs after self-interference cancellation.

    ``s1, s2`` belong to the downlink broadcast seen by the users, ``sp1, sp2``
    to the uplink multiple access seen by the BS. ``beta1, beta2`` are the
    relay amplitude gains, chosen so each relay transmits exactly at ``pR_i``
    (``beta_i**2 * received power = pR_i``).
    """

    s1: float
    s2: float
    sp1: float
    sp2: float
    beta1: float
    beta2: float


@dataclass(frozen=True)
class AfFourPhaseLoads:
    l1: float
    l2: float

    @property
    def total(self) -> float:
        return self.l1 + self.l2


def af_equivalent_snrs(cfg: SystemConfig) -> AfEquivalentSnrs:
    """Broadcast and multiple-access SNRs of the two-phase AF scheme."""
    links = ((cfg.g11, cfg.g12, cfg.p1, cfg.pR1), (cfg.g21, cfg.g22, cfg.p2, cfg.pR2))
    s, beta, fwd, relay_noise = [], [], [], []
    for gu, gb, pu, pr in links:
        rx_power = gu * pu + gb * cfg.pB + 1.0
        beta.append(math.sqrt(pr / rx_power))
        s.append(gu * gb * cfg.pB * pr / (gu * (pu + pr) + gb * cfg.pB + 1.0))
        fwd.append(gu * gb * pu * pr / rx_power)
        relay_noise.append(gb * pr / rx_power)
    bs_noise = relay_noise[0] + relay_noise[1] + 1.0
    return AfEquivalentSnrs(s1=s[0], s2=s[1], sp1=fwd[0] / bs_noise,
                            sp2=fwd[1] / bs_noise, beta1=beta[0], beta2=beta[1])


def af2_downlink_caps(snrs: AfEquivalentSnrs, alpha: float, strong_first: bool):
    """Half-duplex downlink rate limits for one decoding order.

    ``strong_first`` selects the S1 > S2 order (user 2 treats user 1's layer
    as noise); otherwise user 1 does.
    """
    s1, s2 = snrs.s1, snrs.s2
    if strong_first:
        return (0.5 * capacity(s1 * alpha),
                0.5 * capacity(s2 * (1 - alpha) / (s2 * alpha + 1)))
    return (0.5 * capacity(s1 * alpha / (s1 * (1 - alpha) + 1)),
            0.5 * capacity(s2 * (1 - alpha)))


def af2_uplink_caps(snrs: AfEquivalentSnrs):
    return (0.5 * capacity(snrs.sp1), 0.5 * capacity(snrs.sp2),
            0.5 * capacity(snrs.sp1 + snrs.sp2))


def af2_orders(snrs: AfEquivalentSnrs) -> tuple[bool, ...]:
    """Admissible decoding orders; both when the BC SNRs tie."""
    if abs(snrs.s1 - snrs.s2) <= FEAS_TOL:
        return (True, False)
    return (snrs.s1 > snrs.s2,)


def af2_feasible(rates: RateTuple, alpha: float, cfg: SystemConfig) -> bool:
    """Closure of the two-phase AF region at superposition split ``alpha``."""
    check_unit("alpha", alpha)
    snrs = af_equivalent_snrs(cfg)
    c1, c2, csum = af2_uplink_caps(snrs)
    if (rates.r1u > c1 + FEAS_TOL or rates.r2u > c2 + FEAS_TOL
            or rates.r1u + rates.r2u > csum + FEAS_TOL):
        return False
    for order in af2_orders(snrs):
        d1, d2 = af2_downlink_caps(snrs, alpha, order)
        if rates.r1d <= d1 + FEAS_TOL and rates.r2d <= d2 + FEAS_TOL:
            return True
    return False


def af4_capacities(cfg: SystemConfig) -> tuple[float, float, float, float]:
    """Two-way AF capacities (1u, 1d, 2u, 2d) of the time-shared sessions."""
    out = []
    for gu, gb, pu, pr in ((cfg.g11, cfg.g12, cfg.p1, cfg.pR1),
                           (cfg.g21, cfg.g22, cfg.p2, cfg.pR2)):
        up = gu * gb * pu * pr / (gu * pu + gb * (pr + cfg.pB) + 1.0)
        down = gu * gb * cfg.pB * pr / (gb * cfg.pB + gu * (pr + pu) + 1.0)
        out += [capacity(up), capacity(down)]
    return tuple(out)


def af4_loads(rates: RateTuple, cfg: SystemConfig) -> AfFourPhaseLoads:
    c1u, c1d, c2u, c2d = af4_capacities(cfg)
    l1 = max(ratio(2 * rates.r1u, c1u), ratio(2 * rates.r1d, c1d))
    l2 = max(ratio(2 * rates.r2u, c2u), ratio(2 * rates.r2d, c2d))
    return AfFourPhaseLoads(l1, l2)


def af4_feasible(rates: RateTuple, cfg: SystemConfig) -> bool:
    return af4_loads(rates, cfg).total <= 1.0 + FEAS_TOL


def af4_feasible_sweep(rates: RateTuple, cfg: SystemConfig, eta_grid_size: int = 10001) -> bool:
    """Search the session time split ``eta`` on a uniform grid.

    Checks the four per-session constraints directly instead of the
    closed-form loads; kept as a cross-check of :func:`af4_feasible`.
    """
    if eta_grid_size < 2:
        raise ValueError("eta_grid_size must be at least 2")
    c1u, c1d, c2u, c2d = af4_capacities(cfg)
    eta = np.linspace(0.0, 1.0, eta_grid_size)
    ok = ((rates.r1u <= 0.5 * eta * c1u + FEAS_TOL)
          & (rates.r1d <= 0.5 * eta * c1d + FEAS_TOL)
          & (rates.r2u <= 0.5 * (1 - eta) * c2u + FEAS_TOL)
          & (rates.r2d <= 0.5 * (1 - eta) * c2d + FEAS_TOL))
    return bool(ok.any())
