"""Compare the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Each row times one workload with both backends swapped into
``fourway.kernels`` and reports the best of ``N`` runs.
"""
import argparse
import timeit

import numpy as np

from fourway import _kernels_py, kernels
from fourway.core import SystemConfig, TrafficProfile
from fourway.schemes import get_scheme
from fourway.tracer import TracerSettings, trace_boundary

NAMES = ("group_headroom", "polytope_slack", "feasibility_map", "profiled_slack")


def _native():
    try:
        from fourway import _kernels
    except ImportError:
        return None
    return _kernels


def _install(module):
    for name in NAMES:
        setattr(kernels, name, getattr(module, name))


def workloads():
    cfg, prof = SystemConfig(), TrafficProfile(1, 1)
    df2 = get_scheme("df2", cfg)
    alpha = np.linspace(0, 1, 41)
    x = np.array([0.6, 0.6, 0.5, 0.5])
    r = np.linspace(0, 2, 201)
    tau = np.full(9, 0.5)
    a9 = np.linspace(0, 1, 9)
    settings = TracerSettings(r1_grid_points=51)
    return {
        "profiled_slack (41 alphas)": lambda: df2.profiled_slack(x, alpha),
        "slack (41 params)": lambda: df2.slack(x, alpha, alpha),
        "feasibility_map (201x201, 9 params)":
            lambda: df2.feasibility_map(r, r, 1.0, 1.0, a9, tau),
        "trace df2 (51 columns)": lambda: trace_boundary(df2, prof, settings),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    native = _native()
    backends = [("python", _kernels_py)] + ([("cython", native)] if native else [])
    if native is None:
        print("compiled kernels not built; timing the fallback only")
    saved = {name: getattr(kernels, name) for name in NAMES}
    rows = []
    try:
        for label, fn in workloads().items():
            times = {}
            for bname, module in backends:
                _install(module)
                number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
                best = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
                times[bname] = best
            rows.append((label, times))
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)
    print(f"{'workload':40s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for label, t in rows:
        py, cy = t["python"], t.get("cython")
        cy_s = f"{cy * 1e3:10.3f}ms" if cy else f"{'-':>12s}"
        sp = f"{py / cy:7.1f}x" if cy else f"{'-':>8s}"
        print(f"{label:40s} {py * 1e3:10.3f}ms {cy_s} {sp}")


if __name__ == "__main__":
    main()
