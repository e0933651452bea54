"""Time the hot counting kernels with numba and with the pure-Python fallback.

Each backend runs in its own interpreter because the fallback is chosen at
import time from QUIVERJET_DISABLE_NUMBA.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

# (label, catalog key, dim, q, n); sized so the fallback finishes in seconds
CASES = [
    ("A2 d=(1,1) q=3 n=3", "a2", (1, 1), 3, 3),
    ("S2 d=(2) q=2 n=1", "s2", (2,), 2, 1),
    ("triangle d=(1,1,1) q=2 n=3", "triangle", (1, 1, 1), 2, 3),
]


def _worker(repeat: int) -> None:
    import numpy as np

    from quiverjet import _accel, catalog, kernels
    from quiverjet.counting import MomentSystem, count_moment_fiber, kernel_histogram
    from quiverjet.ring import inverse_table

    out = {"backend": _accel.backend(), "cases": []}
    quivers = {"a2": catalog.a2(), "s2": catalog.loops(2), "triangle": catalog.triangle()}
    for label, key, d, q, n in CASES:
        Q = quivers[key]
        system = MomentSystem(Q, d)
        kernel_histogram(system, q, 1)  # compile outside the timed region
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            hist = kernel_histogram(system, q, n)
            times.append(time.perf_counter() - t0)
        count = count_moment_fiber(Q, d, q, n).count
        out["cases"].append({"case": label, "best_s": min(times), "count": count,
                             "points": int(np.sum(hist))})

    # elimination alone on random 6x6 matrices over R_{3,3}
    rng = np.random.default_rng(0)
    mats = rng.integers(0, 3, size=(2000, 6, 6, 3)).astype(np.int64)
    inv = inverse_table(3)
    kernels.kernel_exponent(mats[0].copy(), 3, 3, inv)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for A in mats:
            kernels.kernel_exponent(A.copy(), 3, 3, inv)
        times.append(time.perf_counter() - t0)
    out["cases"].append({"case": "eliminate 2000 x (6x6 over R_{3,3})", "best_s": min(times)})
    print(json.dumps(out))


def _run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("QUIVERJET_DISABLE_NUMBA", None)
    if disable:
        env["QUIVERJET_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.worker:
        _worker(args.repeat)
        return 0
    fast, slow = _run(False, args.repeat), _run(True, args.repeat)
    print(f"{'case':40s} {fast['backend']:>12s} {slow['backend']:>12s} {'speedup':>8s}")
    for a, b in zip(fast["cases"], slow["cases"]):
        if a.get("count") != b.get("count"):
            print(f"count mismatch on {a['case']}: {a['count']} vs {b['count']}", file=sys.stderr)
            return 1
        print(f"{a['case']:40s} {a['best_s']:11.4f}s {b['best_s']:11.4f}s {b['best_s'] / a['best_s']:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
