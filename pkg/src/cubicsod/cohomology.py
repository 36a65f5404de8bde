"""Dimensions of sheaf cohomology of line bundles on the spaces around a cubic fourfold.

Only compositional cases are handled:

* line bundles on projective space (Bott formula),
* split bundles on projective space (degreewise sums),
* line bundles on a projectivised split bundle, via the graded pushforward,
* line bundles on an effective divisor, via ``0 -> O(L-Y) -> O(L) -> O_Y(L) -> 0``,
* cokernels of two-term resolutions by split bundles.

The long exact sequences are resolved only when every map in them is forced:
a map between cohomology groups is forced when its source or target vanishes,
and the map on global sections is injective because it comes from an injective
map of sheaves.  Anything else comes back as an *undetermined* table carrying
the two input tables, so a caller can look at them; no connecting map is guessed.
Euler characteristics stay exact even then.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional, Union

from .piclattice import DivisorClass, PicModel, express, get_model

__all__ = [
    "CohTable",
    "ProjectiveSpace",
    "SplitBundle",
    "ProjBundle",
    "DivisorIn",
    "Resolution",
    "coh_Pn",
    "coh_split",
    "pushforward_projbundle",
    "sym_power",
    "exterior_power",
    "line_cohomology",
    "euler_characteristic",
    "coh_divisor_restriction",
    "coh_resolution",
    "ext_line_bundles",
    "complete_intersection_ideal",
    "cubic_fourfold",
    "plane_ambient",
    "plane_blowup",
    "singular_ambient",
    "singular_blowup",
]


@dataclass(frozen=True)
class CohTable:
    """Cohomology dimensions ``{degree: dim}``, or an undetermined marker.

    Degrees of sheaf cohomology are nonnegative; tables of ``Ext`` between shifted
    objects may sit in negative degrees as well.  An undetermined table keeps the
    tables it was computed from in ``parts`` and, when it is known, the Euler
    characteristic in ``chi``.
    """

    entries: Optional[tuple[tuple[int, int], ...]] = ()
    reason: Optional[str] = None
    parts: tuple["CohTable", ...] = field(default=(), compare=False)
    chi: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.entries is None:
            if self.reason is None:
                raise ValueError("an undetermined table needs a reason")
            return
        merged = Counter()
        for p, d in self.entries:
            if d < 0:
                raise ValueError(f"negative dimension {d} in degree {p}")
            merged[int(p)] += int(d)
        entries = tuple(sorted((p, d) for p, d in merged.items() if d))
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "chi", sum(-d if p % 2 else d for p, d in entries))

    @classmethod
    def of(cls, dims: Optional[dict] = None) -> "CohTable":
        return cls(tuple((dims or {}).items()))

    @classmethod
    def zero(cls) -> "CohTable":
        return cls(())

    @classmethod
    def undetermined(cls, reason: str, parts=(), chi: Optional[int] = None) -> "CohTable":
        return cls(None, reason, tuple(parts), chi)

    @property
    def determined(self) -> bool:
        return self.entries is not None

    @property
    def dims(self) -> dict[int, int]:
        if self.entries is None:
            raise ValueError(f"cohomology undetermined: {self.reason}")
        return dict(self.entries)

    def __getitem__(self, p: int) -> int:
        return self.dims.get(p, 0)

    def is_zero(self) -> bool:
        return self.determined and not self.entries

    @property
    def euler(self) -> int:
        if self.chi is None:
            raise ValueError(f"Euler characteristic unknown: {self.reason}")
        return self.chi

    def shift(self, k: int) -> "CohTable":
        """Move every entry from degree ``p`` to degree ``p + k``."""
        if not self.determined:
            chi = None if self.chi is None else (-self.chi if k % 2 else self.chi)
            return CohTable.undetermined(self.reason, self.parts, chi)
        return CohTable(tuple((p + k, d) for p, d in self.entries))

    def scale(self, n: int) -> "CohTable":
        if n < 0:
            raise ValueError("multiplicity must be nonnegative")
        if not self.determined:
            chi = None if self.chi is None else n * self.chi
            return CohTable.undetermined(self.reason, self.parts, chi)
        return CohTable(tuple((p, n * d) for p, d in self.entries))

    def __add__(self, other: "CohTable") -> "CohTable":
        if not isinstance(other, CohTable):
            return NotImplemented
        if self.determined and other.determined:
            return CohTable(self.entries + other.entries)
        chi = None if self.chi is None or other.chi is None else self.chi + other.chi
        bad = self if not self.determined else other
        return CohTable.undetermined(bad.reason, (self, other), chi)

    def to_json(self) -> dict:
        if self.determined:
            return {"dims": {str(p): d for p, d in self.entries}, "undetermined": False}
        out = {"dims": {}, "undetermined": True, "reason": self.reason}
        if self.parts:
            out["parts"] = [t.to_json() for t in self.parts]
        if self.chi is not None:
            out["chi"] = self.chi
        return out

    @classmethod
    def from_json(cls, data) -> "CohTable":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("undetermined"):
            parts = tuple(cls.from_json(t) for t in data.get("parts", ()))
            return cls.undetermined(data.get("reason", "undetermined"), parts, data.get("chi"))
        return cls(tuple((int(p), int(d)) for p, d in data["dims"].items()))

    def __str__(self):
        if not self.determined:
            return f"undetermined({self.reason})"
        return "{" + ", ".join(f"{p}: {d}" for p, d in self.entries) + "}"


# --------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class ProjectiveSpace:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("projective space needs n >= 1")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def model(self) -> PicModel:
        try:
            return get_model(f"P{self.n}")
        except KeyError:
            return PicModel(f"P{self.n}", ("H",), (), (-(self.n + 1),))

    def canonical(self) -> tuple[int, ...]:
        return (-(self.n + 1),)


@dataclass(frozen=True)
class SplitBundle:
    """Direct sum of ``O(d)`` over projective space, as a sorted multiset of twists."""

    base: ProjectiveSpace
    summands: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.base, ProjectiveSpace):
            raise ValueError("split bundles are only supported over projective space")
        if len(self.summands) == 0:
            raise ValueError("a split bundle needs at least one summand")
        object.__setattr__(self, "summands", tuple(sorted(int(d) for d in self.summands)))

    @property
    def rank(self) -> int:
        return len(self.summands)

    @property
    def degree(self) -> int:
        return sum(self.summands)

    def dual(self) -> "SplitBundle":
        return SplitBundle(self.base, tuple(-d for d in self.summands))

    def twist(self, t: int) -> "SplitBundle":
        return SplitBundle(self.base, tuple(d + t for d in self.summands))

    def __add__(self, other: "SplitBundle") -> "SplitBundle":
        if other.base != self.base:
            raise ValueError("direct sum of bundles on different bases")
        return SplitBundle(self.base, self.summands + other.summands)

    def __str__(self):
        counts = Counter(self.summands)
        return " + ".join(
            (f"{m}*" if m > 1 else "") + (f"O({d})" if d else "O") for d, m in sorted(counts.items(), reverse=True)
        )


def sym_power(summands, a: int) -> tuple[int, ...]:
    """Twists of ``Sym^a`` of a split bundle: sums over size-``a`` multisets of summands."""
    if a < 0:
        raise ValueError("negative symmetric power")
    return tuple(sorted(sum(c) for c in itertools.combinations_with_replacement(summands, a)))


def exterior_power(summands, a: int) -> tuple[int, ...]:
    if a < 0:
        raise ValueError("negative exterior power")
    return tuple(sorted(sum(c) for c in itertools.combinations(summands, a)))


@dataclass(frozen=True)
class ProjBundle:
    """Projective bundle of lines in a split bundle ``E`` over projective space.

    Its Picard model has basis (relative ``O(1)``, pullback of the base hyperplane);
    the relative ``O(1)`` pushes forward to ``E^*``.
    """

    base: ProjectiveSpace
    E: SplitBundle
    model: PicModel = None

    def __post_init__(self):
        if not isinstance(self.base, ProjectiveSpace):
            raise ValueError("projective bundles are only supported over projective space")
        if self.E.base != self.base:
            raise ValueError("bundle lives on another base")
        if self.model is None:
            object.__setattr__(self, "model", PicModel(f"P({self.E})", ("xi", "h"), (), self.canonical()))
        if self.model.rank != 2:
            raise ValueError("projective bundle over projective space has Picard rank 2")

    @property
    def dim(self) -> int:
        return self.base.n + self.E.rank - 1

    def canonical(self) -> tuple[int, ...]:
        return (-self.E.rank, -(self.base.n + 1) - self.E.degree)


@dataclass(frozen=True)
class DivisorIn:
    """An effective Cartier divisor ``Y`` in an ambient space.

    ``lift`` is an integer matrix (rows = ambient coordinates, columns = ``model``
    basis) sending classes of the divisor's own model to ambient classes that
    restrict to them.
    """

    ambient: Union[ProjectiveSpace, ProjBundle, "DivisorIn"]
    divisor: tuple[int, ...]
    model: PicModel
    lift: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "divisor", tuple(int(c) for c in self.divisor))
        object.__setattr__(self, "lift", tuple(tuple(int(c) for c in row) for row in self.lift))
        amb = self.ambient.model
        if len(self.divisor) != amb.rank:
            raise ValueError("divisor class does not live in the ambient model")
        if len(self.lift) != amb.rank or any(len(r) != self.model.rank for r in self.lift):
            raise ValueError("lift matrix has the wrong shape")

    @property
    def dim(self) -> int:
        return self.ambient.dim - 1

    def lift_class(self, coords) -> tuple[int, ...]:
        return tuple(sum(r[j] * coords[j] for j in range(len(coords))) for r in self.lift)

    def restrict_class(self, amb_coords) -> tuple[int, ...]:
        """Inverse of :meth:`lift_class` (the lift must be unimodular)."""
        inv = _integer_inverse(self.lift)
        return tuple(sum(r[j] * amb_coords[j] for j in range(len(amb_coords))) for r in inv)

    def canonical(self) -> tuple[int, ...]:
        amb_k = self.ambient.canonical()
        return self.restrict_class(tuple(k + y for k, y in zip(amb_k, self.divisor)))


def _integer_inverse(m) -> tuple[tuple[int, ...], ...]:
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("lift matrix is not square; no restriction map")
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("lift matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = tuple(tuple(r[n:]) for r in a)
    if any(x.denominator != 1 for r in out for x in r):
        raise ValueError("lift matrix is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in out)


SpaceModel = Union[ProjectiveSpace, ProjBundle, DivisorIn]


# --------------------------------------------------------------------------
# cohomology


def coh_Pn(n: int, t: int) -> CohTable:
    """``H^*(P^n, O(t))`` by the Bott formula."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if t >= 0:
        return CohTable.of({0: comb(n + t, n)})
    if t <= -n - 1:
        return CohTable.of({n: comb(-t - 1, n)})
    return CohTable.zero()


def coh_split(E: SplitBundle, twist: int = 0) -> CohTable:
    total = CohTable.zero()
    for d in E.summands:
        total = total + coh_Pn(E.base.n, d + twist)
    return total


def pushforward_projbundle(a: int, E: SplitBundle) -> tuple[int, Optional[SplitBundle]]:
    """Graded pushforward of ``O(a)`` from the bundle of lines in ``E``.

    Returns ``(degree, bundle)``: ``Sym^a(E^*)`` in degree 0 for ``a >= 0``,
    ``Sym^(-a-r)(E) (x) det E`` in degree ``r - 1`` for ``a <= -r``, and
    ``(0, None)`` in the acyclic range ``-r < a < 0``.
    """
    r = E.rank
    if a >= 0:
        return 0, SplitBundle(E.base, sym_power(E.dual().summands, a))
    if a <= -r:
        det = E.degree
        return r - 1, SplitBundle(E.base, tuple(s + det for s in sym_power(E.summands, -a - r)))
    return 0, None


def _coords(space, cls) -> tuple[int, ...]:
    if isinstance(cls, DivisorClass):
        if cls.model.name != space.model.name:
            raise ValueError(f"class of {cls.model.name} used on a space with model {space.model.name}")
        return cls.coords
    if isinstance(cls, str):
        return express(space.model, cls).coords
    if isinstance(cls, int):
        return (cls,)
    return tuple(int(c) for c in cls)


def line_cohomology(space: SpaceModel, cls) -> CohTable:
    """``H^*(space, O(cls))``; ``cls`` is a class, expression or coordinate tuple."""
    return _line_cohomology(space, _coords(space, cls))


@lru_cache(maxsize=None)
def _line_cohomology(space, coords: tuple[int, ...]) -> CohTable:
    if isinstance(space, ProjectiveSpace):
        (t,) = coords
        return coh_Pn(space.n, t)
    if isinstance(space, ProjBundle):
        a, b = coords
        deg, F = pushforward_projbundle(a, space.E)
        if F is None:
            return CohTable.zero()
        return coh_split(F, b).shift(deg)
    if isinstance(space, DivisorIn):
        amb = space.lift_class(coords)
        return coh_divisor_restriction(space.ambient, space.divisor, amb)
    raise TypeError(f"unsupported space {space!r}")


def euler_characteristic(space: SpaceModel, cls) -> int:
    return line_cohomology(space, cls).euler


def _resolve_les(sub: CohTable, mid: CohTable, what: str, top: Optional[int] = None) -> CohTable:
    """Cohomology of the cokernel ``G`` of an injective sheaf map ``A -> B``.

    ``H^p(G) = coker(H^p A -> H^p B) + ker(H^(p+1) A -> H^(p+1) B)``.  The map in
    degree 0 is injective.  When ``top`` is given the map in that degree is
    surjective (Serre dual of multiplication by a section on ``H^0``).  In every
    other degree one side must vanish.
    """
    chi = None if sub.chi is None or mid.chi is None else mid.chi - sub.chi
    if not (sub.determined and mid.determined):
        return CohTable.undetermined(f"{what}: input table undetermined", (sub, mid), chi)
    a, b = sub.dims, mid.dims
    degrees = set(a) | set(b)
    for p in degrees:
        if p not in (0, top) and a.get(p, 0) and b.get(p, 0):
            return CohTable.undetermined(
                f"{what}: both terms nonzero in degree {p}, connecting map not forced", (sub, mid), chi
            )
    if b.get(0, 0) < a.get(0, 0):
        raise ArithmeticError(f"{what}: injective map on H^0 from dimension {a[0]} into {b.get(0, 0)}")
    if top is not None and a.get(top, 0) < b.get(top, 0):
        raise ArithmeticError(f"{what}: surjective map on H^{top} onto a larger space")

    def rank(p):
        if p == 0:
            return a.get(0, 0)
        if p == top:
            return b.get(p, 0)
        return 0

    out: Counter = Counter()
    for p in degrees | {q - 1 for q in degrees}:
        if p < 0:
            continue
        out[p] += b.get(p, 0) - rank(p) + a.get(p + 1, 0) - rank(p + 1)
    return CohTable(tuple(out.items()))


def coh_divisor_restriction(ambient: SpaceModel, div, line) -> CohTable:
    """``H^*(Y, O_Y(L))`` from ``0 -> O(L - Y) -> O(L) -> O_Y(L) -> 0`` on the ambient space."""
    y = _coords(ambient, div)
    lc = _coords(ambient, line)
    sub = _line_cohomology(ambient, tuple(l - d for l, d in zip(lc, y)))
    mid = _line_cohomology(ambient, lc)
    return _resolve_les(sub, mid, "restriction sequence", top=ambient.dim)


@dataclass(frozen=True)
class Resolution:
    """Two-term resolution ``0 -> F1 -> F0 -> G -> 0`` of a sheaf ``G`` by split bundles."""

    sub: SplitBundle
    mid: SplitBundle

    def __post_init__(self):
        if self.sub.base != self.mid.base:
            raise ValueError("resolution terms live on different bases")


def complete_intersection_ideal(base: ProjectiveSpace, d1: int, d2: int) -> Resolution:
    """Koszul resolution of the ideal sheaf of a complete intersection of degrees ``d1, d2``."""
    return Resolution(SplitBundle(base, (-d1 - d2,)), SplitBundle(base, (-d1, -d2)))


def coh_resolution(terms: Resolution, twist: int = 0) -> CohTable:
    return _resolve_les(coh_split(terms.sub, twist), coh_split(terms.mid, twist), "resolution")


def ext_line_bundles(space: SpaceModel, L1, L2) -> CohTable:
    """``Ext^*(O(L1), O(L2)) = H^*(O(L2 - L1))``."""
    a, b = _coords(space, L1), _coords(space, L2)
    return _line_cohomology(space, tuple(y - x for x, y in zip(a, b)))


# --------------------------------------------------------------------------
# the spaces of the two constructions


def cubic_fourfold() -> DivisorIn:
    return DivisorIn(ProjectiveSpace(5), (3,), get_model("Y"), ((1,),))


def plane_ambient() -> ProjBundle:
    """Blowup of P^5 along a plane: lines in ``3*O + O(-1)`` over P^2."""
    p2 = ProjectiveSpace(2)
    return ProjBundle(p2, SplitBundle(p2, (0, 0, 0, -1)), get_model("plane-ambient"))


def plane_blowup() -> DivisorIn:
    """Blowup of a cubic fourfold along a plane, as the divisor ``2H' + h'``."""
    return DivisorIn(plane_ambient(), (2, 1), get_model("plane-case"), ((1, 0), (0, 1)))


def singular_ambient() -> ProjBundle:
    """Blowup of P^5 at a point: lines in ``O + O(-1)`` over P^4."""
    p4 = ProjectiveSpace(4)
    return ProjBundle(p4, SplitBundle(p4, (0, -1)), get_model("singular-ambient"))


def singular_blowup() -> DivisorIn:
    """Blowup of a nodal cubic fourfold at the node, as the divisor ``H' + 2h'``.

    Model basis ``(h, D)`` lifts as ``h -> h'`` and ``D = 3h - H -> 3h' - H'``.
    """
    return DivisorIn(singular_ambient(), (1, 2), get_model("singular-case"), ((0, -1), (1, 3)))
