"""Exact integer rank computation.

The matrices produced by the cochain engine are sparse incidence-like
matrices whose entries are small integers.  Ranks are computed in two
stages:

1. a sparse integer phase that eliminates with unit pivots only (chosen
   by a Markowitz-style fill estimate), which keeps all arithmetic in
   small integers and touches only rows meeting the pivot column;
2. a dense fraction-free (Bareiss) stage on whatever remains once no
   unit pivot is left.

Stage 2 is the hot kernel.  At import time we pick the compiled Cython
version when it is available and otherwise fall back to the pure-Python
twin; ``BACKEND`` records which one is active.  ``benchmarks/`` compares
the two.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

try:  # pragma: no cover - exercised only when the extension is built
    from edgehodge import _elimcore as _kernel
except ImportError:  # pragma: no cover
    from edgehodge import _elimpure as _kernel

from edgehodge import _elimpure

BACKEND = _kernel.BACKEND

bareiss_rank = _kernel.bareiss_rank
bareiss_rank_pure = _elimpure.bareiss_rank


def _sparse_unit_phase(rows: list[dict[int, int]]):
    """Eliminate with +-1 pivots; returns (#pivots, remaining rows, cols).

    ``rows`` is a list of {column: nonzero int} dicts, consumed in place.
    """
    live = [r for r in rows if r]
    pivots = 0
    while True:
        col_count: dict[int, int] = {}
        for r in live:
            for c in r:
                col_count[c] = col_count.get(c, 0) + 1
        best = None
        best_cost = None
        for ri, r in enumerate(live):
            rn = len(r) - 1
            for c, v in r.items():
                if v == 1 or v == -1:
                    cost = rn * (col_count[c] - 1)
                    if best_cost is None or cost < best_cost:
                        best = (ri, c)
                        best_cost = cost
                        if cost == 0:
                            break
            if best_cost == 0:
                break
        if best is None:
            return pivots, live
        ri, c = best
        prow = live.pop(ri)
        pv = prow[c]
        nxt = []
        for r in live:
            v = r.pop(c, 0)
            if v != 0:
                f = v * pv  # pv in {1,-1}: this is v/pv
                for pc, pw in prow.items():
                    if pc == c:
                        continue
                    w = r.get(pc, 0) - f * pw
                    if w == 0:
                        r.pop(pc, None)
                    else:
                        r[pc] = w
            if r:
                nxt.append(r)
        live = nxt
        pivots += 1


def rank_int_rows(rows: Iterable[Sequence[int]]) -> int:
    """Exact rank of an integer matrix (any iterable of rows)."""
    sparse = []
    for row in rows:
        d = {j: int(v) for j, v in enumerate(row) if v}
        sparse.append(d)
    return rank_sparse(sparse)


def rank_sparse(rows: list[dict[int, int]]) -> int:
    """Exact rank from sparse {col: value} rows (consumed)."""
    pivots, live = _sparse_unit_phase(rows)
    if not live:
        return pivots
    cols = sorted({c for r in live for c in r})
    remap = {c: j for j, c in enumerate(cols)}
    dense = []
    for r in live:
        row = [0] * len(cols)
        for c, v in r.items():
            row[remap[c]] = v
        dense.append(row)
    return pivots + bareiss_rank(dense)


def rank_fraction_rows(rows: Iterable[Sequence[Fraction]]) -> int:
    """Exact rank of a rational matrix; rows are scaled to integers first."""
    sparse = []
    for row in rows:
        scale = 1
        for v in row:
            if v:
                d = v.denominator
                scale = scale * d // _gcd(scale, d)
        d = {}
        for j, v in enumerate(row):
            if v:
                d[j] = int(v * scale)
        sparse.append(d)
    return rank_sparse(sparse)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
