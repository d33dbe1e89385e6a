"""Scenario runner: trace every scheme, cross-check with the oracle, write data files.

Exit codes: 0 success, 1 invalid input or unwritable output, 2 oracle check failed.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .core import ConfigError, SystemConfig, TrafficProfile, validate_config
from .oracle import compare_boundaries, sweep_region, vertical_gaps
from .schemes import SCHEME_IDS, get_scheme
from .tracer import TracerSettings, rate_upper_bound, trace_boundary

log = logging.getLogger("fourway")

EXIT_OK, EXIT_INVALID, EXIT_ORACLE = 0, 1, 2
OUTPUT_ENV = "FOURWAY_OUTPUT_DIR"
CONTAINMENT_PAIRS = (("df2", "df4"), ("df2", "af2"), ("df4", "af4"))
CONTAINMENT_TOL = 1e-4


@dataclass(frozen=True)
class OracleSettings:
    enabled: bool = True
    rate_grid: int = 201
    param_grid: int = 41
    # allowed excess above the traced hull, in lattice cells
    tol_cells: float = 2.0


@dataclass(frozen=True)
class Scenario:
    name: str
    config: SystemConfig
    profile: TrafficProfile
    settings: dict = field(default_factory=dict)

    def tracer_settings(self, base: TracerSettings) -> TracerSettings:
        return dataclasses.replace(base, **self.settings)


def builtin_scenarios() -> list[Scenario]:
    sym, one, half, two = SystemConfig(), TrafficProfile(1, 1), TrafficProfile(0.5, 0.5), TrafficProfile(2, 2)
    return [
        Scenario("fig4", sym, one),
        Scenario("fig5", SystemConfig(g12=0.1, g22=0.1), one),
        Scenario("fig6", SystemConfig(g11=0.1, g21=0.1), one),
        Scenario("fig7", sym, half),
        Scenario("fig8", sym, two),
        Scenario("fig9", sym, TrafficProfile(2, 0.5)),
    ]


def _pick(raw: dict, allowed, where: str) -> dict:
    unknown = set(raw) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")
    return dict(raw)


def scenario_from_dict(raw: dict) -> Scenario:
    """Build a scenario from ``{"name", "config", "profile", "settings"}``."""
    if not isinstance(raw, dict) or "name" not in raw:
        raise ConfigError("scenario entries must be objects with a 'name'")
    raw = _pick(raw, ("name", "config", "profile", "settings"), "scenario")
    name = str(raw["name"])
    cfg_fields = [f.name for f in dataclasses.fields(SystemConfig)]
    set_fields = [f.name for f in dataclasses.fields(TracerSettings)]
    try:
        cfg = SystemConfig(**_pick(raw.get("config", {}), cfg_fields, f"{name}.config"))
        profile = TrafficProfile(**_pick(raw.get("profile", {}), ("theta1", "theta2"),
                                         f"{name}.profile"))
        settings = _pick(raw.get("settings", {}), set_fields, f"{name}.settings")
        TracerSettings(**settings)
        validate_config(cfg)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"scenario {name!r}: {exc}") from exc
    return Scenario(name, cfg, profile, settings)


def load_scenarios(path: Path) -> list[Scenario]:
    """Read a JSON file holding one scenario object or ``{"scenarios": [...]}``."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    entries = data.get("scenarios", [data]) if isinstance(data, dict) else data
    if not isinstance(entries, list):
        raise ConfigError(f"{path}: expected a scenario object or list")
    return [scenario_from_dict(e) for e in entries]


def _fmt(v: float) -> str:
    return f"{float(v) + 0.0:.12g}"


def write_boundary(path: Path, points) -> None:
    lines = ["r1u,r2u"] + [f"{_fmt(a)},{_fmt(b)}" for a, b in np.asarray(points)]
    path.write_text("\n".join(lines) + "\n")


def read_boundary(path: Path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def run_scenario(scenario: Scenario, schemes, output_dir, settings: TracerSettings | None = None,
                 oracle: OracleSettings | None = None, workers: int = 1) -> tuple[dict, bool]:
    """Trace, cross-check and write one scenario.

    Returns the report as an ordered ``key -> value`` dict and whether every
    oracle check passed. The report is also written to ``{name}_report.txt``.
    """
    unknown = [s for s in schemes if s not in SCHEME_IDS]
    if unknown:
        raise ConfigError(f"unknown scheme id(s) {unknown}; expected a subset of {SCHEME_IDS}")
    schemes = [s for s in SCHEME_IDS if s in schemes]
    out = Path(output_dir)
    settings = scenario.tracer_settings(settings or TracerSettings())
    oracle = oracle or OracleSettings()
    report: dict[str, str] = {"scenario": scenario.name, "schemes": ",".join(schemes)}
    ok = True
    files = {}
    for name in schemes:
        scheme = get_scheme(name, scenario.config)
        log.info("%s: tracing %s", scenario.name, name)
        boundary = trace_boundary(scheme, scenario.profile, settings, scenario.name, workers)
        boundary.check()
        files[name] = out / f"{scenario.name}_{name}.csv"
        write_boundary(files[name], boundary.points)
        key = f"{name}."
        report[key + "r1uMax"] = _fmt(boundary.r1u_max)
        report[key + "r2uMax"] = _fmt(boundary.r2u_max)
        report[key + "maxSumRate"] = _fmt(boundary.max_sum_rate)
        if oracle.enabled:
            frontier = sweep_region(scheme, scenario.profile, oracle.rate_grid, oracle.param_grid)
            cell = rate_upper_bound(scheme.cfg) / (oracle.rate_grid - 1)
            rep = compare_boundaries(frontier, boundary, oracle.tol_cells * cell,
                                     oracle.rate_grid, oracle.param_grid)
            report[key + "oracleGap"] = _fmt(rep.hausdorff_gap)
            report[key + "oracleViolations"] = str(rep.containment_violations)
            report[key + "oracleMaxViolation"] = _fmt(rep.max_violation)
            ok &= rep.passed
    # containment verdicts come from the written files, not from memory
    for outer, inner in CONTAINMENT_PAIRS:
        if outer in files and inner in files:
            _, excess = vertical_gaps(read_boundary(files[inner]), read_boundary(files[outer]))
            worst = float(excess.max())
            key = f"contains.{outer}.{inner}"
            report[key] = "true" if worst <= CONTAINMENT_TOL else "false"
            report[key + ".maxViolation"] = _fmt(worst)
    report["oracle"] = ("pass" if ok else "fail") if oracle.enabled else "skipped"
    text = "".join(f"{k}={v}\n" for k, v in report.items())
    (out / f"{scenario.name}_report.txt").write_text(text)
    return report, ok


def parse_report(text: str) -> dict:
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fourway", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list the built-in scenarios")
    run = sub.add_parser("run", help="trace scenarios and write boundary files")
    run.add_argument("scenarios", nargs="*", help="built-in scenario names (default: all)")
    run.add_argument("--config", type=Path, help="JSON file with custom scenarios")
    run.add_argument("--schemes", default=",".join(SCHEME_IDS),
                     help="comma-separated subset of %(default)s")
    run.add_argument("-o", "--output-dir", type=Path,
                     default=Path(os.environ.get(OUTPUT_ENV, "out")),
                     help=f"output directory (default: ${OUTPUT_ENV} or ./out)")
    run.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=True,
                     help="run brute-force oracle cross-checks")
    run.add_argument("--rate-grid", type=int, default=OracleSettings.rate_grid)
    run.add_argument("--param-grid", type=int, default=OracleSettings.param_grid)
    run.add_argument("--r1-grid", type=int, default=TracerSettings.r1_grid_points)
    run.add_argument("--bisection-tol", type=float, default=TracerSettings.bisection_tol)
    run.add_argument("--alpha-grid", type=int, default=TracerSettings.alpha_grid_points)
    run.add_argument("--refine-iterations", type=int, default=TracerSettings.refine_iterations)
    run.add_argument("--workers", type=int, default=1, help="threads per boundary trace")
    return p


def _select(args) -> list[Scenario]:
    builtin = {s.name: s for s in builtin_scenarios()}
    chosen = []
    for name in args.scenarios:
        if name not in builtin:
            raise ConfigError(f"unknown scenario {name!r}; built-ins are {sorted(builtin)}")
        chosen.append(builtin[name])
    if args.config is not None:
        chosen += load_scenarios(args.config)
    elif not args.scenarios:
        chosen = list(builtin.values())
    names = [s.name for s in chosen]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate scenario names in {names}")
    return chosen


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "list":
        for s in builtin_scenarios():
            print(f"{s.name}\tgains=({s.config.g11:g},{s.config.g12:g},{s.config.g22:g},"
                  f"{s.config.g21:g})\ttheta=({s.profile.theta1:g},{s.profile.theta2:g})")
        return EXIT_OK
    try:
        scenarios = _select(args)
        schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
        settings = TracerSettings(r1_grid_points=args.r1_grid, bisection_tol=args.bisection_tol,
                                  alpha_grid_points=args.alpha_grid,
                                  refine_iterations=args.refine_iterations)
        oracle = OracleSettings(args.oracle, args.rate_grid, args.param_grid)
        if oracle.enabled and min(oracle.rate_grid, oracle.param_grid) < 2:
            raise ConfigError("--rate-grid and --param-grid must be at least 2")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        args.output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {args.output_dir}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    log.info("kernel backend: %s", kernels.BACKEND)
    status = EXIT_OK
    for scenario in scenarios:
        try:
            report, ok = run_scenario(scenario, schemes, args.output_dir, settings, oracle,
                                      args.workers)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        except OSError as exc:
            print(f"error: cannot write to {args.output_dir}: {exc}", file=sys.stderr)
            return EXIT_INVALID
        for k, v in report.items():
            print(f"{k}={v}")
        if not ok:
            status = EXIT_ORACLE
    return status


if __name__ == "__main__":
    sys.exit(main())
