"""Achievable rate regions of two-phase and four-phase four-way relaying."""
from .core import (ConfigError, RateTuple, RegionBoundary, SchemeParams, SystemConfig,
                   TrafficProfile, capacity, validate_config)
from .kernels import BACKEND
from .oracle import SweepReport, compare_boundaries, sweep_region
from .schemes import SCHEME_IDS, Scheme, get_scheme
from .tracer import (TracerError, TracerSettings, convex_closure, lift_rates,
                     max_rate_on_axis, trace_boundary)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConfigError", "RateTuple", "RegionBoundary", "SCHEME_IDS", "Scheme",
    "SchemeParams", "SweepReport", "SystemConfig", "TracerError", "TracerSettings",
    "TrafficProfile", "capacity", "compare_boundaries", "convex_closure", "get_scheme",
    "lift_rates", "max_rate_on_axis", "sweep_region", "trace_boundary", "validate_config",
]
