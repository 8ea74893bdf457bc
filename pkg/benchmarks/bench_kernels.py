"""Time the compiled and numpy word-search kernels on the same targets.

    python benchmarks/bench_kernels.py [--depth 14] [--repeat 3]
"""

import argparse
import time

import numpy as np

from discowalk import kernels
from discowalk.logical import RX_NATIVE, SQRT_Z


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    gens = np.stack([SQRT_Z, RX_NATIVE])
    targets = {
        "hadamard": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
        "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    }
    print(f"words per target: {2 ** (args.depth + 1) - 1}")
    print(f"{'target':<10} {'backend':<8} {'seconds':>10} {'distance':>20}")
    for name, target in targets.items():
        runs = [("numpy", kernels.word_search_py)]
        if kernels._compiled is not None:
            runs.append(("cython", kernels.word_search_compiled))
        times = {}
        for label, fn in runs:
            t, (_, d) = best_of(lambda: fn(gens, target, args.depth), args.repeat)
            times[label] = t
            print(f"{name:<10} {label:<8} {t:>10.4f} {d:>20.15g}")
        if len(times) == 2:
            print(f"{name:<10} speedup  {times['numpy'] / times['cython']:>10.2f}x")
    if kernels._compiled is None:
        print("compiled extension not built; only the numpy path was timed")


if __name__ == "__main__":
    main()
