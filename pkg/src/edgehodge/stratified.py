"""Edge-space models and perversity-indexed intersection cohomology.

A simple edge space is presented by finite rational cochain complexes
for the link F, the singular stratum B, the boundary Y of the tube
(identified with B ⊗ F), and the regular part M, together with the
restriction map M -> Y.  Intersection cohomology for a perversity p is
computed at chain level from the total complex of the cover {M, tube}:

    Tot^s = M^s ⊕ T^s ⊕ Y^(s-1),   D(m, t, y) = (dm, dt, ρm - ιt - dy)

where T = B ⊗ τ_{<=c} F is the cone-truncated tube complex with cutoff

    c = f - 1 - p,

evaluated exactly over the rationals (p may be any rational; the
extended ranges p <= 0 and p >= f are allowed).  The degree left open
by the usual local truncation table is resolved to zero; this is the
unique choice consistent with the weighted cone-cohomology dictionary
and it preserves Poincare duality for extended perversities.  One
consequence worth knowing: the identity IH_p = H(M) for non-positive
perversities holds for p <= -1, while p in (-1, 0] still truncates away
the top fibre degree.

Working at chain level (rather than chasing dimensions through the
exact sequence) makes the natural maps between perversities honest
chain maps, so their ranks on cohomology are well-defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from edgehodge.cochain import (
    CochainComplex,
    ComplexMap,
    QMatrix,
    ZERO_COMPLEX,
    block_matrix,
    complex_from_dict,
    complex_to_dict,
    direct_sum,
    induced_map_rank,
    map_from_dict,
    map_to_dict,
    mapping_cone,
    tensor,
    tensor_map,
    truncate,
)
from edgehodge.errors import (
    ModelInvariantError,
    PerversityRangeError,
)


class Perversity:
    """A single rational perversity value at the link codimension f+1.

    The extended ranges p <= 0 and p >= f are allowed; half-integer
    values arise from the complete-metric dictionary.
    """

    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, Perversity):
            self.value = value.value
        else:
            self.value = Fraction(value)

    def __add__(self, other):
        return Perversity(self.value + Fraction(other))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return Perversity(self.value - Fraction(other))

    def __eq__(self, other):
        return self.value == _pval(other)

    def __le__(self, other):
        return self.value <= _pval(other)

    def __lt__(self, other):
        return self.value < _pval(other)

    def __ge__(self, other):
        return self.value >= _pval(other)

    def __gt__(self, other):
        return self.value > _pval(other)

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"Perversity({self.value})"


def _pval(p) -> Fraction:
    if isinstance(p, Perversity):
        return p.value
    return Fraction(p)


def middle_perversities(f: int) -> tuple[int, int]:
    """Lower and upper middle perversity values at codimension f+1."""
    if f < 0:
        raise ValueError("link dimension must be nonnegative")
    if f % 2 == 1:
        m = (f - 1) // 2
        return m, m
    return f // 2, f // 2 - 1


def cone_truncation_cutoff(f: int, p) -> Fraction:
    """Highest fibre degree kept by perversity p: degrees k <= f - 1 - p."""
    return Fraction(f - 1) - _pval(p)


def cone_local_ih(f_betti, f: int, p, k: int) -> int:
    """Local intersection cohomology of the cone over a link with the
    given Betti numbers: the fibre class survives iff k <= f - 1 - p."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k >= len(f_betti):
        return 0
    return f_betti[k] if Fraction(k) <= cone_truncation_cutoff(f, p) else 0


@dataclass(frozen=True)
class IHReport:
    """Graded intersection cohomology dimensions at one perversity."""

    perversity: Perversity
    dims: tuple[int, ...]


class EdgeSpaceModel:
    """Finite presentation of a space with one simple edge stratum.

    ``Y`` must be the product complex tensor(B, F) (built-ins always
    are); a model without this bigrading cannot feed the truncated-tube
    machinery and is rejected by the perversity engine.
    """

    def __init__(self, name: str, n: int, b: int, f: int,
                 F: CochainComplex, B: CochainComplex,
                 M: CochainComplex, Y: CochainComplex,
                 restriction: ComplexMap,
                 product_bigrading: bool = True,
                 description: str = ""):
        self.name = name
        self.n = n
        self.b = b
        self.f = f
        self.F = F
        self.B = B
        self.M = M
        self.Y = Y
        self.restriction = restriction
        self.product_bigrading = product_bigrading
        self.description = description
        self._tube_cache: dict[int, tuple[CochainComplex, ComplexMap]] = {}
        self._tot_cache: dict[int, CochainComplex] = {}
        self._rank_cache: dict[tuple[int, int, int], int] = {}
        self.validate()

    # -- structural invariants ---------------------------------------

    def validate(self) -> None:
        if self.n != self.b + self.f + 1:
            raise ModelInvariantError(f"{self.name}: n != b + f + 1")
        if self.F.top_degree != self.f:
            raise ModelInvariantError(f"{self.name}: top degree of F is not f")
        if self.B.top_degree != self.b:
            raise ModelInvariantError(f"{self.name}: top degree of B is not b")
        for c in (self.F, self.B, self.M, self.Y):
            if not c.verify():
                raise ModelInvariantError(f"{self.name}: a complex fails d∘d = 0")
        if self.restriction.source is not self.M and self.restriction.source != self.M:
            raise ModelInvariantError(f"{self.name}: restriction source is not M")
        if self.restriction.target is not self.Y and self.restriction.target != self.Y:
            raise ModelInvariantError(f"{self.name}: restriction target is not Y")
        if not self.restriction.commutes():
            raise ModelInvariantError(f"{self.name}: restriction is not a chain map")
        if self.product_bigrading:
            conv = kunneth_convolution(self.B.cohomology_dims(), self.F.cohomology_dims())
            ydims = self.Y.cohomology_dims()
            if tuple(conv) != tuple(ydims):
                raise ModelInvariantError(
                    f"{self.name}: cohomology of Y disagrees with the Kunneth convolution"
                )

    # -- truncated tube and total complex -----------------------------

    def effective_cutoff(self, p) -> int:
        """Integer truncation level in [-1, f] determined by p."""
        c = cone_truncation_cutoff(self.f, p)
        ci = c.numerator // c.denominator  # floor
        return max(-1, min(self.f, ci))

    def truncated_tube(self, c: int) -> tuple[CochainComplex, ComplexMap]:
        """Tube complex B ⊗ τ_{<=c}F with its inclusion into Y."""
        if not self.product_bigrading:
            raise ModelInvariantError(
                f"{self.name}: missing bigrading; cannot truncate the tube"
            )
        if c not in self._tube_cache:
            tf, incl = truncate(self.F, c)
            if not tf.dims:
                tube = ZERO_COMPLEX
                iota = ComplexMap(tube, self.Y, (), check=False)
            else:
                tube = tensor(self.B, tf)
                iota = tensor_map(ComplexMap.identity(self.B), incl)
                # tensor_map targets tensor(B, F); rebind onto the model's Y
                iota = ComplexMap(tube, self.Y, iota.maps, check=False)
            self._tube_cache[c] = (tube, iota)
        return self._tube_cache[c]

    def total_complex(self, c: int) -> CochainComplex:
        """Mayer-Vietoris total complex for truncation level c."""
        if c not in self._tot_cache:
            tube, iota = self.truncated_tube(c)
            m, y = self.M, self.Y
            top = max(m.top_degree, tube.top_degree, y.top_degree + 1, 0)
            dims = [m.dim(s) + tube.dim(s) + y.dim(s - 1) for s in range(top + 1)]
            ds = []
            for s in range(top):
                blocks = [
                    [m.d_at(s), None, None],
                    [None, tube.d_at(s), None],
                    [self.restriction.at(s), -iota.at(s), -y.d_at(s - 1)],
                ]
                ds.append(block_matrix(
                    blocks,
                    [m.dim(s + 1), tube.dim(s + 1), y.dim(s)],
                    [m.dim(s), tube.dim(s), y.dim(s - 1)],
                ))
            self._tot_cache[c] = CochainComplex(dims, ds)
        return self._tot_cache[c]

    def _truncation_inclusion(self, c1: int, c2: int) -> ComplexMap:
        t1, i1 = truncate(self.F, c1)
        t2, _ = truncate(self.F, c2)
        if c1 >= min(c2, self.F.top_degree):
            return ComplexMap.identity(t1)
        if not t1.dims:
            return ComplexMap(t1, t2, (), check=False)
        return ComplexMap(t1, t2, i1.maps[: c1 + 1], check=False)

    def total_map(self, c1: int, c2: int) -> ComplexMap:
        """Chain map Tot(c1) -> Tot(c2) for c1 <= c2 (stronger to weaker)."""
        tot1, tot2 = self.total_complex(c1), self.total_complex(c2)
        tube1, _ = self.truncated_tube(c1)
        tube2, _ = self.truncated_tube(c2)
        fincl = self._truncation_inclusion(c1, c2)
        if tube1.dims:
            tincl = tensor_map(ComplexMap.identity(self.B), fincl)
        else:
            tincl = ComplexMap(tube1, tube2, (), check=False)
        maps = []
        for s in range(tot1.top_degree + 1):
            blocks = [
                [QMatrix.identity(self.M.dim(s)), None, None],
                [None, tincl.at(s), None],
                [None, None, QMatrix.identity(self.Y.dim(s - 1))],
            ]
            maps.append(block_matrix(
                blocks,
                [self.M.dim(s), tube2.dim(s), self.Y.dim(s - 1)],
                [self.M.dim(s), tube1.dim(s), self.Y.dim(s - 1)],
            ))
        return ComplexMap(tot1, tot2, maps, check=False)

    def __repr__(self):
        return f"EdgeSpaceModel({self.name!r}, n={self.n}, b={self.b}, f={self.f})"


def kunneth_convolution(b1, b2) -> tuple[int, ...]:
    """Graded convolution of two Betti sequences."""
    if not b1 or not b2:
        return ()
    out = [0] * (len(b1) + len(b2) - 1)
    for i, x in enumerate(b1):
        for j, y in enumerate(b2):
            out[i + j] += x * y
    return tuple(out)


def tube_ih(space: EdgeSpaceModel, p) -> tuple[int, ...]:
    """Intersection cohomology of the tube: Kunneth with the truncated cone.

    dims[k] = sum over i+j=k, j <= f-1-p of betti(B)[i] * betti(F)[j].
    """
    if not space.product_bigrading:
        raise ModelInvariantError(f"{space.name}: missing bigrading")
    cutoff = cone_truncation_cutoff(space.f, p)
    bb = space.B.cohomology_dims()
    bf = space.F.cohomology_dims()
    out = [0] * (space.n + 1)
    for i, x in enumerate(bb):
        for j, y in enumerate(bf):
            if Fraction(j) <= cutoff and i + j <= space.n:
                out[i + j] += x * y
    return tuple(out)


def ih_dims(space: EdgeSpaceModel, p) -> tuple[int, ...]:
    """Graded intersection cohomology of the space at perversity p."""
    tot = space.total_complex(space.effective_cutoff(p))
    h = tot.cohomology_dims()
    out = list(h) + [0] * (space.n + 1 - len(h))
    return tuple(out[: space.n + 1])


def ih_dim(space: EdgeSpaceModel, p, k: int) -> int:
    """Dimension of IH^k_p, from the chain-level Mayer-Vietoris complex."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    dims = ih_dims(space, p)
    return dims[k] if k < len(dims) else 0


def ih_report(space: EdgeSpaceModel, p) -> IHReport:
    return IHReport(Perversity(p), ih_dims(space, p))


def ih_map_rank(space: EdgeSpaceModel, p_src, p_tgt, k: int) -> int:
    """Rank of the natural map IH^k_{p_src} -> IH^k_{p_tgt}.

    Requires p_src >= p_tgt, i.e. the source truncation is contained in
    the target truncation.
    """
    if _pval(p_src) < _pval(p_tgt):
        raise PerversityRangeError(
            "incompatible perversity order: need p_src >= p_tgt"
        )
    if k < 0:
        raise ValueError("degree must be nonnegative")
    c1 = space.effective_cutoff(p_src)
    c2 = space.effective_cutoff(p_tgt)
    if c1 == c2:
        return ih_dim(space, p_src, k)
    key = (c1, c2, k)
    if key not in space._rank_cache:
        phi = space.total_map(c1, c2)
        top = max(phi.source.top_degree, phi.target.top_degree)
        space._rank_cache[key] = induced_map_rank(phi, k) if k <= top else 0
    return space._rank_cache[key]


def extended_identities(space: EdgeSpaceModel, p) -> tuple[int, ...]:
    """Extended-range identities: H(M) for p <= 0, relative cohomology of
    (X, singular stratum) via the cone of restriction for p >= f.

    The relative branch agrees with ih_dims for every p >= f.  The
    absolute branch agrees for p <= -1; at p in (-1, 0] the engine's
    truncation still removes the top fibre degree (see module notes).
    """
    pv = _pval(p)
    if pv >= space.f:
        cone = mapping_cone(space.restriction)
        h = cone.cohomology_dims()
    elif pv <= 0:
        h = space.M.cohomology_dims()
    else:
        raise PerversityRangeError(
            "extended identities need p <= 0 or p >= f"
        )
    out = list(h) + [0] * (space.n + 1 - len(h))
    return tuple(out[: space.n + 1])


# ---------------------------------------------------------------------------
# built-in catalogue


def circle_complex() -> CochainComplex:
    """Circle as a CW complex with two vertices and two edges."""
    return CochainComplex((2, 2), [QMatrix(2, 2, [[-1, 1], [-1, 1]])])


def point_complex() -> CochainComplex:
    return CochainComplex((1,), ())


def two_point_complex() -> CochainComplex:
    return CochainComplex((2,), ())


def interval_complex() -> CochainComplex:
    """Interval: two vertices, one edge (contractible)."""
    return CochainComplex((2, 1), [QMatrix(1, 2, [[-1, 1]])])


def sphere2_complex() -> CochainComplex:
    """Minimal rational model of the 2-sphere."""
    return CochainComplex((1, 0, 1), [QMatrix.zeros(0, 1), QMatrix.zeros(1, 0)])


def torus_complex() -> CochainComplex:
    c = circle_complex()
    return tensor(c, c)


def _diagonal_map(base: CochainComplex) -> ComplexMap:
    """base -> base ⊕ base, x -> (x, x)."""
    doubled = direct_sum(base, base)
    maps = []
    for k in range(base.top_degree + 1):
        ident = QMatrix.identity(base.dim(k))
        maps.append(block_matrix([[ident], [ident]],
                                 [base.dim(k), base.dim(k)], [base.dim(k)]))
    return ComplexMap(base, doubled, maps, check=False)


def _cone_model(name: str, fibre: CochainComplex, description: str) -> EdgeSpaceModel:
    """Truncated cone over the fibre: one point stratum, boundary at x=1."""
    b_cx = point_complex()
    y = tensor(b_cx, fibre)
    m = y
    restriction = ComplexMap.identity(y)
    f = fibre.top_degree
    return EdgeSpaceModel(name, f + 1, 0, f, fibre, b_cx, m, y, restriction,
                          description=description)


def _closed_model(name: str, base: CochainComplex, fibre: CochainComplex,
                  description: str) -> EdgeSpaceModel:
    """Fibrewise suspension over the base: two copies of the stratum,
    closed total space, so Poincare duality applies."""
    b_cx = direct_sum(base, base)
    y = tensor(b_cx, fibre)
    m = tensor(base, fibre)
    restriction = tensor_map(_diagonal_map(base), ComplexMap.identity(fibre))
    restriction = ComplexMap(m, y, restriction.maps, check=False)
    f = fibre.top_degree
    b = base.top_degree
    return EdgeSpaceModel(name, b + f + 1, b, f, fibre, b_cx, m, y, restriction,
                          description=description)


_BUILDERS = {
    "cone-circle": lambda: _cone_model(
        "cone-circle", circle_complex(),
        "cone over S^1 (point stratum, link S^1, boundary at x=1)"),
    "cone-torus": lambda: _cone_model(
        "cone-torus", torus_complex(),
        "cone over T^2 (point stratum, link T^2, boundary at x=1)"),
    "cone-sphere2": lambda: _cone_model(
        "cone-sphere2", sphere2_complex(),
        "cone over S^2 (point stratum, link S^2, boundary at x=1)"),
    "susp-torus": lambda: _closed_model(
        "susp-torus", point_complex(), torus_complex(),
        "suspension of T^2 (two cone points, closed)"),
    "edge-circle-over-circle": lambda: _closed_model(
        "edge-circle-over-circle", circle_complex(), circle_complex(),
        "S^1 x (suspension of S^1): two circle strata with link S^1, closed"),
    "edge-torus-over-circle": lambda: _closed_model(
        "edge-torus-over-circle", circle_complex(), torus_complex(),
        "S^1 x (suspension of T^2): two circle strata with link T^2, closed"),
}

BUILTIN_NAMES = tuple(_BUILDERS)


def builtin_space(name: str) -> EdgeSpaceModel:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown space {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    return builder()


def catalogue() -> list[dict]:
    out = []
    for name in BUILTIN_NAMES:
        s = builtin_space(name)
        out.append({
            "name": name,
            "n": s.n,
            "b": s.b,
            "f": s.f,
            "description": s.description,
        })
    return out


# ---------------------------------------------------------------------------
# serialization


def model_to_dict(space: EdgeSpaceModel) -> dict:
    return {
        "name": space.name,
        "n": space.n,
        "b": space.b,
        "f": space.f,
        "F": complex_to_dict(space.F),
        "B": complex_to_dict(space.B),
        "M": complex_to_dict(space.M),
        "Y": complex_to_dict(space.Y),
        "restriction": map_to_dict(space.restriction),
        "bigrading": "product" if space.product_bigrading else "none",
        "description": space.description,
    }


def model_from_dict(data: dict) -> EdgeSpaceModel:
    f_cx = complex_from_dict(data["F"])
    b_cx = complex_from_dict(data["B"])
    m_cx = complex_from_dict(data["M"])
    y_cx = complex_from_dict(data["Y"])
    restriction = map_from_dict(m_cx, y_cx, data["restriction"])
    return EdgeSpaceModel(
        data.get("name", "unnamed"),
        int(data["n"]), int(data["b"]), int(data["f"]),
        f_cx, b_cx, m_cx, y_cx, restriction,
        product_bigrading=data.get("bigrading", "product") == "product",
        description=data.get("description", ""),
    )
