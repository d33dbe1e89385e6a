"""System configuration, rate types and the single-link capacity primitive.

Every scheme module works on a :class:`SystemConfig` that has been passed
through :func:`validate_config`, i.e. with powers already expressed relative
to a unit noise floor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Sequence

import numpy as np

# Slack below which an inequality counts as violated; also the S1 == S2 tie band.
FEAS_TOL = 1e-12


class ConfigError(ValueError):
    """Raised when a configuration or parameter violates its invariants."""


def capacity(gamma: float) -> float:
    """Gaussian link capacity ``log2(1 + gamma)`` in bits per channel use.

    >>> capacity(3.0)
    2.0
    """
    if not math.isfinite(gamma) or gamma < 0:
        raise ValueError(f"capacity needs a finite nonnegative SNR, got {gamma!r}")
    return math.log2(1.0 + gamma)


def capacity_array(gamma):
    """Vectorised :func:`capacity` without the domain check (hot paths)."""
    return np.log2(1.0 + np.asarray(gamma, dtype=float))


@dataclass(frozen=True)
class SystemConfig:
    """Squared channel gains, transmit powers and receiver noise variance.

    Gains follow the link naming ``11`` (U1-RS1), ``12`` (RS1-BS),
    ``22`` (BS-RS2) and ``21`` (RS2-U2).
    """

    g11: float = 1.0
    g12: float = 1.0
    g22: float = 1.0
    g21: float = 1.0
    p1: float = 10.0
    pR1: float = 10.0
    pB: float = 10.0
    pR2: float = 10.0
    p2: float = 10.0
    noise_var: float = 1.0

    GAINS = ("g11", "g12", "g22", "g21")
    POWERS = ("p1", "pR1", "pB", "pR2", "p2")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class RateTuple:
    """Four-dimensional rate point in bits per channel use."""

    r1u: float = 0.0
    r1d: float = 0.0
    r2u: float = 0.0
    r2d: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not v >= 0:
                raise ConfigError(f"{f.name} must be a nonnegative rate, got {v!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.r1u, self.r1d, self.r2u, self.r2d], dtype=float)

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "RateTuple":
        r1u, r1d, r2u, r2d = (float(v) for v in values)
        return cls(r1u, r1d, r2u, r2d)


@dataclass(frozen=True)
class TrafficProfile:
    """Downlink-uplink ratios: ``r_id = theta_i * r_iu``."""

    theta1: float = 1.0
    theta2: float = 1.0

    def __post_init__(self):
        for name in ("theta1", "theta2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive finite ratio, got {v!r}")


@dataclass(frozen=True)
class SchemeParams:
    """Superposition split ``alpha`` and phase-1 time fraction ``tau``."""

    alpha: float = 0.5
    tau: float = 0.5

    def __post_init__(self):
        check_unit("alpha", self.alpha)
        check_unit("tau", self.tau)


@dataclass(frozen=True)
class RegionBoundary:
    """Upper-right boundary of a traced (r1u, r2u) region.

    ``points`` is an ``(n, 2)`` array ordered by increasing ``r1u``. The only
    repeated abscissa allowed is a final vertical drop onto the ``r1u`` axis.
    """

    scheme: str
    scenario: str
    points: np.ndarray
    r1u_max: float
    r2u_max: float
    max_sum_rate: float

    def check(self, tol: float = 1e-9) -> None:
        """Raise ``ValueError`` if ordering, axis or convexity invariants fail."""
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 1:
            raise ValueError(f"points must be a nonempty (n, 2) array, got shape {pts.shape}")
        x, y = pts[:, 0], pts[:, 1]
        if abs(x[0]) > tol:
            raise ValueError(f"first point not on r2u axis: {pts[0]}")
        if abs(y[-1]) > tol:
            raise ValueError(f"last point not on r1u axis: {pts[-1]}")
        dx = np.diff(x)
        if len(dx) and (np.any(dx[:-1] <= 0) or dx[-1] < 0):
            raise ValueError("r1u must increase strictly (a final vertical drop is allowed)")
        if np.any(np.diff(y) > tol):
            raise ValueError("r2u must be nonincreasing")
        if not is_convex_chain(pts, tol):
            raise ValueError("boundary is not concave from above")


def is_convex_chain(pts: np.ndarray, tol: float = 1e-9) -> bool:
    """True if the polyline turns clockwise (or goes straight) at every vertex.

    Equivalent to nonpositive second differences of ``r2u`` over ``r1u`` but
    also valid across a vertical final segment.
    """
    pts = np.asarray(pts, dtype=float)
    if len(pts) < 3:
        return True
    d = np.diff(pts, axis=0)
    cross = d[:-1, 0] * d[1:, 1] - d[:-1, 1] * d[1:, 0]
    # normalise by segment lengths so the test is a slope-change tolerance
    norm = np.hypot(d[:-1, 0], d[:-1, 1]) * np.hypot(d[1:, 0], d[1:, 1])
    norm = np.where(norm > 0, norm, 1.0)
    return bool(np.all(cross / norm <= tol))


def check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise ConfigError(f"{name} must lie in [0, 1], got {value!r}")


def validate_config(cfg: SystemConfig) -> SystemConfig:
    """Check invariants and rescale powers to unit noise variance.

    Returns a new config with every power divided by ``noise_var`` and
    ``noise_var`` set to 1. Applying it twice is a no-op.
    """
    for name in SystemConfig.GAINS + SystemConfig.POWERS:
        v = getattr(cfg, name)
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"{name} must be a finite number, got {v!r}")
        if v < 0:
            raise ConfigError(f"{name} must be nonnegative, got {v!r}")
    nv = cfg.noise_var
    if not isinstance(nv, (int, float)) or not math.isfinite(nv) or nv <= 0:
        raise ConfigError(f"noise_var must be positive, got {nv!r}")
    if nv == 1.0:
        return cfg
    scaled = {name: getattr(cfg, name) / nv for name in SystemConfig.POWERS}
    return replace(cfg, noise_var=1.0, **scaled)


def ratio(num: float, den: float) -> float:
    """Load ratio with ``0/0 -> 0`` and ``x/0 -> inf`` for ``x > 0``."""
    if den > 0:
        return num / den
    return 0.0 if num <= 0 else math.inf


def ratio_array(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)
    return np.where((den <= 0) & (num <= 0), 0.0, out)
