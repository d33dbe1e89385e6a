"""Kernel backend selection.

The compiled extension is used when it imports; set ``FOURWAY_KERNELS=python``
to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("FOURWAY_KERNELS", "").lower() != "python":
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        pass

group_headroom = _impl.group_headroom
polytope_slack = _impl.polytope_slack
feasibility_map = _impl.feasibility_map
profiled_slack = _impl.profiled_slack

__all__ = ["BACKEND", "group_headroom", "polytope_slack", "feasibility_map",
           "profiled_slack"]
