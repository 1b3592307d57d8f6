#!/usr/bin/env python3
"""Benchmark the compiled elimination kernel against the pure-Python twin.

Three workloads:

1. dense random integer matrices (the Bareiss stage in isolation);
2. the actual Mayer-Vietoris total-complex differentials of the largest
   built-in space, pushed through the full sparse+dense rank pipeline;
3. an end-to-end intersection cohomology table with the active backend.

Run:  python3 benchmarks/bench_elimination.py
"""

import random
import statistics
import time

from edgehodge import _elimpure, elim
from edgehodge.stratified import builtin_space, ih_dims

try:
    from edgehodge import _elimcore
except ImportError:
    _elimcore = None


def _time(fn, repeats=5):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.median(samples)


def _random_dense(rng, m, n, span=4):
    return [[rng.randint(-span, span) for _ in range(n)] for _ in range(m)]


def bench_dense():
    rng = random.Random(42)
    print("dense Bareiss rank (best of 5, seconds)")
    print(f"{'size':>10} {'pure':>12} {'compiled':>12} {'speedup':>9}")
    for size in (40, 80, 120, 160):
        mat = _random_dense(rng, size, size)
        pure_best, _ = _time(lambda: _elimpure.bareiss_rank([r[:] for r in mat]))
        if _elimcore is not None:
            comp_best, _ = _time(lambda: _elimcore.bareiss_rank([r[:] for r in mat]))
            print(f"{size:>8}^2 {pure_best:>12.4f} {comp_best:>12.4f} "
                  f"{pure_best / comp_best:>8.1f}x")
        else:
            print(f"{size:>8}^2 {pure_best:>12.4f} {'absent':>12}")


def bench_engine_matrices():
    space = builtin_space("edge-torus-over-circle")
    tot = space.total_complex(1)
    mats = [tot.d_at(k) for k in range(tot.top_degree)]
    rows_sets = [
        [{j: int(x) for j, x in enumerate(row) if x} for row in m.entries]
        for m in mats
    ]
    print("\nsparse+dense pipeline on total-complex differentials")

    def run_all():
        for rows in rows_sets:
            elim.rank_sparse([dict(r) for r in rows])

    best, med = _time(run_all)
    sizes = ", ".join(f"{m.rows}x{m.cols}" for m in mats)
    print(f"  matrices: {sizes}")
    print(f"  all ranks: best {best:.4f}s, median {med:.4f}s "
          f"(backend: {elim.BACKEND})")


def bench_end_to_end():
    print("\nend-to-end intersection cohomology (fresh caches each run)")

    def run():
        space = builtin_space("edge-torus-over-circle")
        for p in range(-1, space.f + 2):
            ih_dims(space, p)

    best, med = _time(run, repeats=3)
    print(f"  full perversity sweep: best {best:.3f}s, median {med:.3f}s "
          f"(backend: {elim.BACKEND})")


if __name__ == "__main__":
    print(f"active backend: {elim.BACKEND}")
    bench_dense()
    bench_engine_matrices()
    bench_end_to_end()
