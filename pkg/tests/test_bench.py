import importlib.util
from pathlib import Path

from fourway import kernels

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


def test_benchmark_runs_and_restores_backend(capsys, monkeypatch):
    spec = importlib.util.spec_from_file_location("bench_kernels", BENCH)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    full = bench.workloads()
    monkeypatch.setattr(bench, "workloads", lambda: {k: full[k] for k in list(full)[:2]})
    before = kernels.profiled_slack
    bench.main(["--repeat", "1"])
    assert kernels.profiled_slack is before
    out = capsys.readouterr().out
    assert "profiled_slack" in out and "speedup" in out
