"""Weight-to-perversity dictionary for weighted L2 de Rham cohomology.

Two rounding brackets drive everything: ceil_strict(t) is the least
integer strictly greater than t, ceil_weak(t) the least integer >= t.
For an incomplete edge metric with weight a the max/min extensions of d
compute intersection cohomology at the perversities

    max:  mbar + ceil_strict(a - 1)    (f odd)
          mbar + ceil_strict(a - 1/2)  (f even)
    min:  mlow + ceil_weak(a)          (f odd)
          mlow + ceil_weak(a - 1/2)    (f even)

and the minimal Hodge cohomology is the image of the min-perversity
group in the max-perversity one.  For a complete edge metric, degree k
is infinite-dimensional exactly when k = j + (b+1)/2 hits a nonzero
fibre Betti number, and otherwise equals IH at perversity f + b/2 - k.

Weights are exact rationals end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from edgehodge.stratified import (
    EdgeSpaceModel,
    Perversity,
    ih_dims,
    ih_map_rank,
    middle_perversities,
)


def ceil_strict(t) -> int:
    """Least integer strictly greater than t."""
    t = Fraction(t)
    return t.numerator // t.denominator + 1


def ceil_weak(t) -> int:
    """Least integer greater than or equal to t."""
    t = Fraction(t)
    return -((-t.numerator) // t.denominator)


@dataclass(frozen=True)
class WeightedReport:
    """Graded dimensions for one weight and one extension."""

    weight: Fraction
    extension: str  # "max" | "min" | "minimal-hodge"
    dims: tuple[int, ...]
    perversity: Perversity


@dataclass(frozen=True)
class CompleteL2Answer:
    degree: int
    finite: bool
    dim: int | None
    perversity: Perversity | None

    @property
    def verdict(self) -> str:
        return f"Finite({self.dim})" if self.finite else "Infinite"


def max_perversity(f: int, a) -> Perversity:
    a = Fraction(a)
    _, mbar = middle_perversities(f)
    shift = ceil_strict(a - 1) if f % 2 == 1 else ceil_strict(a - Fraction(1, 2))
    return Perversity(mbar + shift)


def min_perversity(f: int, a) -> Perversity:
    a = Fraction(a)
    mlow, _ = middle_perversities(f)
    shift = ceil_weak(a) if f % 2 == 1 else ceil_weak(a - Fraction(1, 2))
    return Perversity(mlow + shift)


def weighted_derham_dims(space: EdgeSpaceModel, a, ext: str) -> WeightedReport:
    """Weighted de Rham dimensions for extension ``ext`` in {"max","min"}."""
    a = Fraction(a)
    if ext == "max":
        p = max_perversity(space.f, a)
    elif ext == "min":
        p = min_perversity(space.f, a)
    else:
        raise ValueError(f"extension must be 'max' or 'min', got {ext!r}")
    return WeightedReport(a, ext, ih_dims(space, p), p)


def minimal_hodge_dims(space: EdgeSpaceModel, a) -> WeightedReport:
    """Minimal Hodge dimensions: image ranks from the min-perversity
    group into the max-perversity group, degree by degree."""
    a = Fraction(a)
    p_src = min_perversity(space.f, a)
    p_tgt = max_perversity(space.f, a)
    dims = tuple(
        ih_map_rank(space, p_src, p_tgt, k) for k in range(space.n + 1)
    )
    return WeightedReport(a, "minimal-hodge", dims, p_src)


def complete_l2(space: EdgeSpaceModel, k: int) -> CompleteL2Answer:
    """Degree-k L2 Hodge cohomology verdict for a complete edge metric."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    f_betti = space.F.cohomology_dims()
    j = Fraction(k) - Fraction(space.b + 1, 2)
    if j.denominator == 1:
        ji = int(j)
        if 0 <= ji < len(f_betti) and f_betti[ji] > 0:
            return CompleteL2Answer(k, False, None, None)
    p = Perversity(Fraction(space.f) + Fraction(space.b, 2) - k)
    dims = ih_dims(space, p)
    d = dims[k] if k < len(dims) else 0
    return CompleteL2Answer(k, True, d, p)
