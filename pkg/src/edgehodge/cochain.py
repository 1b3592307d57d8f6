"""Exact rational linear algebra over finite cochain complexes.

Everything here is computed over the rationals with exact arithmetic:
Betti numbers are dimension identities, so floating point ranks are
deliberately not offered.  Complexes are graded in degrees 0..top with
explicit matrices between adjacent degrees; empty degrees have
dimension 0 and the differentials off the ends are zero matrices of the
appropriate shapes.

Values are immutable after construction (the only mutation is internal
memoisation of ranks), and every operation is a pure function, so
concurrent read-only use from several threads is safe.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from edgehodge import elim
from edgehodge.errors import (
    ChainMapError,
    ShapeMismatchError,
    UnverifiedComplexError,
)

Rational = Fraction | int


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class QMatrix:
    """Immutable matrix of exact rationals."""

    __slots__ = ("rows", "cols", "entries", "_rank")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable[Rational]]):
        self.rows = rows
        self.cols = cols
        ents = tuple(tuple(_frac(x) for x in row) for row in entries)
        if len(ents) != rows or any(len(r) != cols for r in ents):
            raise ShapeMismatchError(f"entries do not form a {rows}x{cols} matrix")
        self.entries = ents
        self._rank = None

    @staticmethod
    def zeros(rows: int, cols: int) -> "QMatrix":
        z = Fraction(0)
        return QMatrix(rows, cols, ((z,) * cols for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return QMatrix(n, n, ((Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @staticmethod
    def from_rows(entries: Sequence[Sequence[Rational]], cols: int | None = None) -> "QMatrix":
        rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        return QMatrix(rows, cols, entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, ((-x for x in row) for row in self.entries))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatchError("matrix addition shape mismatch")
        return QMatrix(
            self.rows,
            self.cols,
            ((a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def scale(self, c: Rational) -> "QMatrix":
        c = _frac(c)
        return QMatrix(self.rows, self.cols, ((c * x for x in row) for row in self.entries))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ShapeMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        # sparse-aware accumulation: most entries in practice are zero
        other_nz = [
            [(j, v) for j, v in enumerate(row) if v] for row in other.entries
        ]
        zero = Fraction(0)
        out = []
        for row in self.entries:
            acc = [zero] * other.cols
            for k, a in enumerate(row):
                if a:
                    for j, b in other_nz[k]:
                        acc[j] += a * b
            out.append(acc)
        return QMatrix(self.rows, other.cols, out)

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, zip(*self.entries)) if self.rows else QMatrix(
            self.cols, 0, ((),) * self.cols
        )

    def kron(self, other: "QMatrix") -> "QMatrix":
        out = []
        for arow in self.entries:
            for brow in other.entries:
                out.append([a * b for a in arow for b in brow])
        return QMatrix(self.rows * other.rows, self.cols * other.cols, out)

    def rank(self) -> int:
        if self._rank is None:
            if self.rows == 0 or self.cols == 0:
                self._rank = 0
            else:
                self._rank = elim.rank_fraction_rows(self.entries)
        return self._rank

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)


def block_matrix(blocks: Sequence[Sequence[QMatrix | None]],
                 row_dims: Sequence[int], col_dims: Sequence[int]) -> QMatrix:
    """Assemble a block matrix; None blocks are zero."""
    rows = sum(row_dims)
    cols = sum(col_dims)
    zero = Fraction(0)
    out = [[zero] * cols for _ in range(rows)]
    r0 = 0
    for bi, rd in enumerate(row_dims):
        c0 = 0
        for bj, cd in enumerate(col_dims):
            blk = blocks[bi][bj]
            if blk is not None:
                if blk.rows != rd or blk.cols != cd:
                    raise ShapeMismatchError(
                        f"block ({bi},{bj}) is {blk.rows}x{blk.cols}, wanted {rd}x{cd}"
                    )
                for i, row in enumerate(blk.entries):
                    orow = out[r0 + i]
                    for j, v in enumerate(row):
                        if v:
                            orow[c0 + j] = v
            c0 += cd
        r0 += rd
    return QMatrix(rows, cols, out)


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def kernel_basis(mat: QMatrix) -> QMatrix:
    """Matrix whose columns form a basis of the null space of ``mat``."""
    if mat.cols == 0:
        return QMatrix.zeros(0, 0)
    if mat.rows == 0:
        return QMatrix.identity(mat.cols)
    rows, pivots = _rref([list(r) for r in mat.entries])
    free = [j for j in range(mat.cols) if j not in pivots]
    cols = []
    for f in free:
        v = [Fraction(0)] * mat.cols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][f]
        cols.append(v)
    return QMatrix(mat.cols, len(cols), zip(*cols)) if cols else QMatrix.zeros(mat.cols, 0)


def solve_columns(a: QMatrix, b: QMatrix) -> QMatrix:
    """Solve a X = b where a has full column rank and the system is consistent."""
    if a.rows != b.rows:
        raise ShapeMismatchError("solve_columns: row mismatch")
    aug = [list(ra) + list(rb) for ra, rb in zip(a.entries, b.entries)]
    rows, pivots = _rref(aug)
    if any(p >= a.cols for p in pivots):
        raise ShapeMismatchError("solve_columns: inconsistent system")
    if len(pivots) != a.cols:
        raise ShapeMismatchError("solve_columns: matrix does not have full column rank")
    x = [[Fraction(0)] * b.cols for _ in range(a.cols)]
    for r, pc in enumerate(pivots):
        for j in range(b.cols):
            x[pc][j] = rows[r][a.cols + j]
    return QMatrix(a.cols, b.cols, x)


class CochainComplex:
    """Finite cochain complex over the rationals.

    ``dims[k]`` is the dimension in degree k and ``d[k]`` maps degree k
    to degree k+1.  A complex with empty ``dims`` is the zero complex.
    """

    __slots__ = ("dims", "d", "_betti", "_verified")

    def __init__(self, dims: Sequence[int], d: Sequence[QMatrix]):
        self.dims = tuple(int(x) for x in dims)
        self.d = tuple(d)
        if self.dims and len(self.d) != len(self.dims) - 1:
            raise ShapeMismatchError(
                f"{len(self.dims)} degrees need {len(self.dims) - 1} differentials, got {len(self.d)}"
            )
        if not self.dims and self.d:
            raise ShapeMismatchError("zero complex cannot carry differentials")
        for k, mat in enumerate(self.d):
            if mat.cols != self.dims[k] or mat.rows != self.dims[k + 1]:
                raise ShapeMismatchError(
                    f"d[{k}] is {mat.rows}x{mat.cols}, expected {self.dims[k+1]}x{self.dims[k]}"
                )
        self._betti = None
        self._verified = None

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def dim(self, k: int) -> int:
        if 0 <= k < len(self.dims):
            return self.dims[k]
        return 0

    def d_at(self, k: int) -> QMatrix:
        """Differential out of degree k, zero-extended off the ends."""
        if 0 <= k < len(self.d):
            return self.d[k]
        return QMatrix.zeros(self.dim(k + 1), self.dim(k))

    def verify(self) -> bool:
        if self._verified is None:
            self._verified = all(
                (self.d[k + 1] @ self.d[k]).is_zero() for k in range(len(self.d) - 1)
            )
        return self._verified

    def cohomology_dims(self) -> tuple[int, ...]:
        if self._betti is None:
            if not self.verify():
                raise UnverifiedComplexError("d∘d != 0; refusing to compute cohomology")
            out = []
            for k in range(len(self.dims)):
                out.append(self.dims[k] - self.d_at(k).rank() - self.d_at(k - 1).rank())
            self._betti = tuple(out)
        return self._betti

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.dims))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CochainComplex)
            and self.dims == other.dims
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.dims, self.d))

    def __repr__(self):
        return f"CochainComplex(dims={self.dims})"


ZERO_COMPLEX = CochainComplex((), ())


def verify_complex(c: CochainComplex) -> bool:
    """True iff every composite d∘d vanishes (shapes are checked on build)."""
    return c.verify()


def cohomology_dims(c: CochainComplex) -> tuple[int, ...]:
    """Graded dimensions of ker d / im d."""
    return c.cohomology_dims()


class ComplexMap:
    """Degreewise linear map commuting with the differentials."""

    __slots__ = ("source", "target", "maps")

    def __init__(self, source: CochainComplex, target: CochainComplex,
                 maps: Sequence[QMatrix], check: bool = True):
        self.source = source
        self.target = target
        self.maps = tuple(maps)
        for k, m in enumerate(self.maps):
            if m.cols != source.dim(k) or m.rows != target.dim(k):
                raise ShapeMismatchError(
                    f"map[{k}] is {m.rows}x{m.cols}, expected {target.dim(k)}x{source.dim(k)}"
                )
        if check and not self.commutes():
            raise ChainMapError("maps do not commute with the differentials")

    def at(self, k: int) -> QMatrix:
        if 0 <= k < len(self.maps):
            return self.maps[k]
        return QMatrix.zeros(self.target.dim(k), self.source.dim(k))

    def commutes(self) -> bool:
        top = max(self.source.top_degree, self.target.top_degree)
        for k in range(top + 1):
            lhs = self.target.d_at(k) @ self.at(k)
            rhs = self.at(k + 1) @ self.source.d_at(k)
            if not (lhs + (-rhs)).is_zero():
                return False
        return True

    @staticmethod
    def identity(c: CochainComplex) -> "ComplexMap":
        return ComplexMap(c, c, [QMatrix.identity(n) for n in c.dims], check=False)

    @staticmethod
    def zero(source: CochainComplex, target: CochainComplex) -> "ComplexMap":
        top = min(source.top_degree, target.top_degree)
        return ComplexMap(
            source, target,
            [QMatrix.zeros(target.dim(k), source.dim(k)) for k in range(top + 1)],
            check=False,
        )

    def compose(self, inner: "ComplexMap") -> "ComplexMap":
        """self ∘ inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise ShapeMismatchError("compose: middle complexes disagree")
        top = min(inner.source.top_degree, self.target.top_degree)
        return ComplexMap(
            inner.source, self.target,
            [self.at(k) @ inner.at(k) for k in range(top + 1)],
            check=False,
        )


def tensor(c1: CochainComplex, c2: CochainComplex) -> CochainComplex:
    """Tensor product complex with the usual sign (-1)^i on the second factor.

    Basis order in degree n: blocks (i, n-i) with i ascending; within a
    block the first factor index is major.
    """
    if not c1.verify() or not c2.verify():
        raise UnverifiedComplexError("tensor factors must satisfy d∘d = 0")
    if not c1.dims or not c2.dims:
        return ZERO_COMPLEX
    top = c1.top_degree + c2.top_degree
    dims = []
    for n in range(top + 1):
        dims.append(sum(c1.dim(i) * c2.dim(n - i) for i in range(n + 1)))
    ds = []
    for n in range(top):
        col_blocks = [(i, n - i) for i in range(n + 1)]
        row_blocks = [(i, n + 1 - i) for i in range(n + 2)]
        col_dims = [c1.dim(i) * c2.dim(j) for i, j in col_blocks]
        row_dims = [c1.dim(i) * c2.dim(j) for i, j in row_blocks]
        blocks: list[list[QMatrix | None]] = [
            [None] * len(col_blocks) for _ in range(len(row_blocks))
        ]
        for ci, (i, j) in enumerate(col_blocks):
            if col_dims[ci] == 0:
                continue
            # d1 ⊗ id : block (i, j) -> (i+1, j)
            ri = next(r for r, ij in enumerate(row_blocks) if ij == (i + 1, j))
            if row_dims[ri]:
                blocks[ri][ci] = c1.d_at(i).kron(QMatrix.identity(c2.dim(j)))
            # (-1)^i id ⊗ d2 : block (i, j) -> (i, j+1)
            ri = next(r for r, ij in enumerate(row_blocks) if ij == (i, j + 1))
            if row_dims[ri]:
                blk = QMatrix.identity(c1.dim(i)).kron(c2.d_at(j))
                blocks[ri][ci] = blk if i % 2 == 0 else -blk
        ds.append(block_matrix(blocks, row_dims, col_dims))
    return CochainComplex(dims, ds)


def tensor_map(phi: ComplexMap, psi: ComplexMap) -> ComplexMap:
    """Tensor product of chain maps, from tensor(sources) to tensor(targets)."""
    src = tensor(phi.source, psi.source)
    tgt = tensor(phi.target, psi.target)
    maps = []
    for n in range(src.top_degree + 1):
        col_blocks = [(i, n - i) for i in range(n + 1)]
        col_dims = [phi.source.dim(i) * psi.source.dim(j) for i, j in col_blocks]
        row_dims = [phi.target.dim(i) * psi.target.dim(j) for i, j in col_blocks]
        blocks: list[list[QMatrix | None]] = [
            [None] * len(col_blocks) for _ in range(len(col_blocks))
        ]
        for bi, (i, j) in enumerate(col_blocks):
            if col_dims[bi] and row_dims[bi]:
                blocks[bi][bi] = phi.at(i).kron(psi.at(j))
        maps.append(block_matrix(blocks, row_dims, col_dims))
    return ComplexMap(src, tgt, maps, check=False)


def mapping_cone(phi: ComplexMap) -> CochainComplex:
    """Cone of a chain map, graded so degree s holds source^s ⊕ target^(s-1).

    With this grading the cone of a restriction map computes relative
    cohomology in its natural degrees, and
    χ(cone) = χ(source) - χ(target).
    """
    if not phi.commutes():
        raise ChainMapError("mapping_cone: not a chain map")
    a, b = phi.source, phi.target
    if not a.dims and not b.dims:
        return ZERO_COMPLEX
    top = max(a.top_degree, b.top_degree + 1)
    dims = [a.dim(s) + b.dim(s - 1) for s in range(top + 1)]
    ds = []
    for s in range(top):
        blocks = [
            [a.d_at(s), None],
            [phi.at(s), -b.d_at(s - 1)],
        ]
        ds.append(
            block_matrix(
                blocks,
                [a.dim(s + 1), b.dim(s)],
                [a.dim(s), b.dim(s - 1)],
            )
        )
    return CochainComplex(dims, ds)


def induced_map_rank(phi: ComplexMap, k: int) -> int:
    """Rank of the map induced on degree-k cohomology.

    Uses the block-rank identity
    rank H^k(φ) = rank [[φ_k, d_B], [d_A, 0]] - rank d_A^k - rank d_B^(k-1),
    so only integer ranks are ever computed.
    """
    a, b = phi.source, phi.target
    if k < 0 or k > max(a.top_degree, b.top_degree):
        raise ValueError(f"degree {k} out of range")
    da = a.d_at(k)
    db = b.d_at(k - 1)
    big = block_matrix(
        [[phi.at(k), db], [da, None]],
        [b.dim(k), a.dim(k + 1)],
        [a.dim(k), b.dim(k - 1)],
    )
    return big.rank() - da.rank() - db.rank()


def truncate(c: CochainComplex, m: int) -> tuple[CochainComplex, ComplexMap]:
    """Canonical truncation τ_{<=m} together with its inclusion.

    Cohomology of the result equals that of ``c`` in degrees <= m and
    vanishes above; degree m is cut down to the kernel of d.
    """
    if not c.verify():
        raise UnverifiedComplexError("truncate: complex must satisfy d∘d = 0")
    if m < 0 or not c.dims:
        t = ZERO_COMPLEX
        return t, ComplexMap(t, c, (), check=False)
    if m >= c.top_degree:
        return c, ComplexMap.identity(c)
    ker = kernel_basis(c.d_at(m))
    dims = list(c.dims[:m]) + [ker.cols]
    ds = list(c.d[: max(m - 1, 0)])
    if m >= 1:
        ds.append(solve_columns(ker, c.d_at(m - 1)))
    t = CochainComplex(dims, ds)
    incl = [QMatrix.identity(c.dims[k]) for k in range(m)] + [ker]
    return t, ComplexMap(t, c, incl, check=False)


def direct_sum(c1: CochainComplex, c2: CochainComplex) -> CochainComplex:
    if not c1.dims:
        return c2
    if not c2.dims:
        return c1
    top = max(c1.top_degree, c2.top_degree)
    dims = [c1.dim(k) + c2.dim(k) for k in range(top + 1)]
    ds = []
    for k in range(top):
        ds.append(
            block_matrix(
                [[c1.d_at(k), None], [None, c2.d_at(k)]],
                [c1.dim(k + 1), c2.dim(k + 1)],
                [c1.dim(k), c2.dim(k)],
            )
        )
    return CochainComplex(dims, ds)


# ---------------------------------------------------------------------------
# serialization: key/value structure with row-major rational strings


def matrix_to_lists(m: QMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m.entries]


def matrix_from_lists(rows: int, cols: int, data: Sequence[Sequence[str]]) -> QMatrix:
    return QMatrix(rows, cols, ((Fraction(s) for s in row) for row in data))


def complex_to_dict(c: CochainComplex) -> dict:
    return {
        "dims": list(c.dims),
        "differentials": [matrix_to_lists(m) for m in c.d],
    }


def complex_from_dict(data: dict) -> CochainComplex:
    dims = [int(x) for x in data["dims"]]
    ds = []
    for k, rows in enumerate(data["differentials"]):
        ds.append(matrix_from_lists(dims[k + 1], dims[k], rows))
    return CochainComplex(dims, ds)


def map_to_dict(phi: ComplexMap) -> dict:
    return {"maps": [matrix_to_lists(m) for m in phi.maps]}


def map_from_dict(source: CochainComplex, target: CochainComplex, data: dict) -> ComplexMap:
    maps = []
    for k, rows in enumerate(data["maps"]):
        maps.append(matrix_from_lists(target.dim(k), source.dim(k), rows))
    return ComplexMap(source, target, maps)
