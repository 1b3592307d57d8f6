# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free elimination kernel.

Same algorithm and contract as ``edgehodge._elimpure``, plus a guarded
machine-integer fast path: elimination runs on C int64 while every
entry stays below 2^30 (so one Bareiss update cannot overflow), and
hands the remaining submatrix to the arbitrary-precision loop the
moment that bound is hit.  Incidence-like matrices almost never leave
the fast path.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"

cdef long long GUARD = (<long long>1) << 30


cdef long long _ll_abs(long long x):
    return -x if x < 0 else x


def bareiss_rank(list rows):
    """Rank of an integer matrix given as a list of row lists (consumed)."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = len(rows[0]) if m else 0
    if m == 0 or n == 0:
        return 0
    cdef Py_ssize_t i, j
    cdef object v
    cdef bint fits = True
    cdef long long w
    # try to load into C storage
    cdef long long *data = <long long *> malloc(m * n * sizeof(long long))
    if data == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            row = rows[i]
            for j in range(n):
                v = row[j]
                if fits and -GUARD < v < GUARD:
                    data[i * n + j] = v
                else:
                    fits = False
                    break
            if not fits:
                break
        if not fits:
            return _object_rank(rows, 0, 1)
        return _fast_rank(data, rows, m, n)
    finally:
        free(data)


cdef Py_ssize_t _fast_rank(long long *data, list rows, Py_ssize_t m, Py_ssize_t n):
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t c, i, j, piv
    cdef long long prev = 1
    cdef long long p, v, best, a, biggest
    cdef long long *prow
    cdef long long *rowp
    for c in range(n):
        if rank == m:
            break
        # magnitude guard: one update step needs |p*u - v*r| / prev to fit
        biggest = 0
        for i in range(rank, m):
            for j in range(c, n):
                a = _ll_abs(data[i * n + j])
                if a > biggest:
                    biggest = a
        if biggest >= GUARD:
            _export(data, rows, m, n)
            return rank + _object_rank(rows[rank:], c, prev)
        piv = -1
        best = 0
        for i in range(rank, m):
            v = data[i * n + c]
            if v != 0:
                a = _ll_abs(v)
                if piv < 0 or a < best:
                    piv = i
                    best = a
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, n):
                p = data[piv * n + j]
                data[piv * n + j] = data[rank * n + j]
                data[rank * n + j] = p
        prow = data + rank * n
        p = prow[c]
        for i in range(rank + 1, m):
            rowp = data + i * n
            v = rowp[c]
            if v != 0:
                for j in range(c + 1, n):
                    rowp[j] = (p * rowp[j] - v * prow[j]) // prev
                rowp[c] = 0
            elif p != prev:
                for j in range(c + 1, n):
                    if rowp[j] != 0:
                        rowp[j] = (p * rowp[j]) // prev
        prev = p
        rank += 1
    return rank


cdef void _export(long long *data, list rows, Py_ssize_t m, Py_ssize_t n):
    cdef Py_ssize_t i, j
    for i in range(m):
        row = rows[i]
        for j in range(n):
            row[j] = data[i * n + j]


def _object_rank(list rows, Py_ssize_t start_col, object prev):
    """Arbitrary-precision Bareiss continuation from a given column/pivot."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = len(rows[0]) if m else 0
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t c, i, j, piv
    cdef list row, prow
    cdef object p, v, a, best
    for c in range(start_col, n):
        if rank == m:
            break
        piv = -1
        best = 0
        for i in range(rank, m):
            row = rows[i]
            v = row[c]
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
                    v = row[j]
                    if v != 0:
                        row[j] = (p * v) // prev
        prev = p
        rank += 1
    return rank
