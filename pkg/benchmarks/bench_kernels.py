"""Time the compiled kernels against their pure-Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import importlib
import time

import numpy as np

from hdioph import _kernels_py

CASES = {
    "carnot_dists": lambda k: k.carnot_dists(0x5A5A5A5A5A, 0x123456789A, 0x0FEDCBA987, 40, 1, 2, 20_000),
    "gauss_sieve": lambda k: k.gauss_sieve(20_000),
    "siegel_scan": lambda k: k.siegel_scan(0.318, -0.271, 0.442, 1.0, 1.0, 60),
}


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return bool(np.array_equal(a, b))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        compiled = importlib.import_module("hdioph._kernels")
    except ImportError:
        raise SystemExit("compiled extension not built; run pip install -e . first")
    print(f"{'kernel':<14}{'cython (s)':>12}{'python (s)':>12}{'speedup':>10}  identical")
    for name, call in CASES.items():
        tc = best_time(lambda: call(compiled), args.repeat)
        tp = best_time(lambda: call(_kernels_py), 1)
        ok = same(call(compiled), call(_kernels_py))
        print(f"{name:<14}{tc:>12.4f}{tp:>12.4f}{tp / tc:>10.1f}  {ok}")


if __name__ == "__main__":
    main()
