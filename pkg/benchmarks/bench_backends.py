"""Compare the exact-arithmetic backends on representative workloads.

Every workload runs in a fresh interpreter with KDVCORR_BACKEND set, because
the backend is chosen once at import time.  The reported time is measured
inside the child process, so interpreter startup is excluded.  Expect the
gmp-backed rationals to pull ahead as numerators and denominators grow; the
pure-stdlib Fraction backend exists so the package works without compiled
dependencies.

Usage: python3 benchmarks/bench_backends.py [--repeat N] [--backend NAME ...]
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys

WORKLOADS = [
    ("two-point-table-30", "from kdvcorr import wk", "wk.n_point_table(2, 30, k_min=2)"),
    ("three-point-table-20", "from kdvcorr import wk", "wk.n_point_table(3, 20, k_min=2)"),
    ("four-point-table-9", "from kdvcorr import wk", "wk.n_point_table(4, 9, k_min=2)"),
    ("wp-volume-2-2", "from kdvcorr import wp", "wp.wp_volume(2, 2)"),
    ("selftest-depth-16", "from kdvcorr.selftest import run_selftest", "run_selftest(16)"),
]

_CHILD = """\
import time
{setup}
from kdvcorr.rationals import BACKEND
assert BACKEND == {backend!r}, BACKEND
start = time.perf_counter()
{stmt}
print(time.perf_counter() - start)
"""


def _time_once(setup: str, stmt: str, backend: str) -> float | None:
    env = dict(os.environ, KDVCORR_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", _CHILD.format(setup=setup, stmt=stmt, backend=backend)],
        capture_output=True,
        text=True,
        env=env,
    )
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        return None
    return float(proc.stdout.strip())


def _best_of(setup: str, stmt: str, backend: str, repeat: int) -> float | None:
    times = []
    for _ in range(repeat):
        t = _time_once(setup, stmt, backend)
        if t is None:
            return None
        times.append(t)
    return min(times)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--repeat", type=int, default=3, help="runs per workload, best time kept"
    )
    parser.add_argument(
        "--backend",
        action="append",
        choices=("gmpy2", "fraction"),
        help="backend(s) to time; default both",
    )
    args = parser.parse_args(argv)
    if args.repeat < 1:
        parser.error("--repeat must be at least 1")
    backends = args.backend or ["fraction", "gmpy2"]

    width = max(len(name) for name, _, _ in WORKLOADS)
    header = f"{'workload':<{width}}" + "".join(f"  {b:>10}" for b in backends)
    if len(backends) == 2:
        header += f"  {'ratio':>7}"
    print(header)
    for name, setup, stmt in WORKLOADS:
        row = f"{name:<{width}}"
        times = []
        for backend in backends:
            t = _best_of(setup, stmt, backend, args.repeat)
            times.append(t)
            row += f"  {t:>9.3f}s" if t is not None else f"  {'n/a':>10}"
        if len(times) == 2 and None not in times and times[1] > 0:
            row += f"  {times[0] / times[1]:>6.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
