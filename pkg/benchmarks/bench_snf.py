"""Compare the compiled and pure-Python Smith form kernels.

The compiled column times the library dispatch: int64 first, bigint
kernel again on overflow.  The last column counts those fallbacks.

    python benchmarks/bench_snf.py [--repeat 3]
"""

import argparse
import random
import time

from critgroup import _snf_py
from critgroup.graph import enumerate_connected, random_connected_graph

try:
    from critgroup import _snf_c
except ImportError:
    _snf_c = None


def laplacian_batch(n, count, rng):
    out = []
    for _ in range(count):
        G = random_connected_graph(n, rng, p=0.5, max_mult=2)
        M = G.laplacian()
        out.append((M.entries, M.rows, M.cols))
    return out


def dense_batch(n, count, rng, bound=20):
    return [
        (tuple(rng.randint(-bound, bound) for _ in range(n * n)), n, n) for _ in range(count)
    ]


def compiled_with_fallback(stats):
    def kernel(entries, r, c):
        try:
            return _snf_c.smith_kernel(entries, r, c)
        except OverflowError:
            stats["fallbacks"] += 1
            return _snf_py.smith_kernel(entries, r, c)

    return kernel


def time_kernel(kernel, batch, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for entries, r, c in batch:
            kernel(entries, r, c)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    workloads = [
        ("all connected graphs n=5", [
            (G.laplacian().entries, 5, 5) for G in enumerate_connected(5)
        ]),
        ("random multigraphs n=8 x500", laplacian_batch(8, 500, rng)),
        ("random multigraphs n=16 x100", laplacian_batch(16, 100, rng)),
        ("dense |a|<=20 n=6 x500", dense_batch(6, 500, rng)),
    ]
    print(f"{'workload':<32} {'python s':>10} {'cython s':>10} {'speedup':>8} {'overflows':>9}")
    for name, batch in workloads:
        tp = time_kernel(_snf_py.smith_kernel, batch, a.repeat)
        if _snf_c is None:
            print(f"{name:<32} {tp:>10.4f} {'n/a':>10} {'':>8}")
            continue
        stats = {"fallbacks": 0}
        kernel = compiled_with_fallback(stats)
        tc = time_kernel(kernel, batch, a.repeat)
        stats["fallbacks"] = 0
        for entries, r, c in batch:
            assert kernel(entries, r, c) == _snf_py.smith_kernel(entries, r, c)
        per_run = stats["fallbacks"]
        print(f"{name:<32} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x {per_run:>4}/{len(batch)}")


if __name__ == "__main__":
    main()
