"""Pure-Python fraction-free elimination kernel.

Fallback twin of the compiled module ``edgehodge._elimcore``: the same
Bareiss elimination, minus the guarded machine-integer fast path, so
the package works without a C toolchain.  See ``edgehodge.elim`` for
the dispatching wrapper and the sparse front end.
"""

from __future__ import annotations

BACKEND = "pure"


def bareiss_rank(rows):
    """Rank of an integer matrix given as a list of row lists.

    Fraction-free (Bareiss) elimination: every intermediate entry is a
    minor of the input, so all divisions are exact and arithmetic stays
    in the integers.  The input rows are consumed (modified in place).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    rank = 0
    prev = 1
    for c in range(n):
        if rank == m:
            break
        piv = -1
        best = 0
        for i in range(rank, m):
            v = rows[i][c]
            if v != 0:
                a = -v if v < 0 else v
                if piv < 0 or a < best:
                    piv = i
                    best = a
        if piv < 0:
            continue
        if piv != rank:
            rows[piv], rows[rank] = rows[rank], rows[piv]
        prow = rows[rank]
        p = prow[c]
        for i in range(rank + 1, m):
            row = rows[i]
            v = row[c]
            if v != 0:
                for j in range(c + 1, n):
                    row[j] = (p * row[j] - v * prow[j]) // prev
                row[c] = 0
            elif p != prev:
                for j in range(c + 1, n):
                    w = row[j]
                    if w != 0:
                        row[j] = (p * w) // prev
        prev = p
        rank += 1
    return rank
