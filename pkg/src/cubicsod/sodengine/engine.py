"""Mutations, transpositions, Serre rotations and collapses of semiorthogonal decompositions.

Indices are 0-based.  ``mutate_left(sod, k)`` and ``mutate_right(sod, k)`` act on
the adjacent pair at positions ``k, k+1``::

    <.., A, B, ..>  --mutate_left-->   <.., L_A(B), A, ..>
    <.., A, B, ..>  --mutate_right-->  <.., B, R_B(A), ..>
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..cohomology import CohTable
from .geometry import Geometry, NoOracle
from .terms import Component, LeftMut, LineBundle, PushforwardLB, RightMut, shift, unshift

__all__ = [
    "SOD",
    "Fact",
    "FactBase",
    "MissingFact",
    "NoCollapseRule",
    "Collapse",
    "mutate_left",
    "mutate_right",
    "transpose",
    "serre_rotate",
    "twist_sod",
    "collapse_exceptional_mutation",
    "collapse",
    "hilbert_shadow",
    "shadow_additivity",
]


class MissingFact(ValueError):
    """An operation needs an orthogonality fact that is neither certified nor asserted."""


class NoCollapseRule(ValueError):
    """No rule identifies the mutated object with a simpler one."""


@dataclass(frozen=True)
class SOD:
    geometry: Geometry = field(compare=False, repr=False)
    components: tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("a semiorthogonal decomposition needs at least one component")

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i) -> Component:
        return self.components[i]

    def key(self):
        return (self.geometry.name, tuple(c.key() for c in self.components))

    def __eq__(self, other):
        if not isinstance(other, SOD):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def replace(self, comps) -> "SOD":
        return SOD(self.geometry, tuple(comps))

    def describe(self) -> list[str]:
        return [self.geometry.describe(c) for c in self.components]

    def __str__(self):
        return "<" + ", ".join(self.describe()) + ">"

    def to_json(self) -> list:
        return [self.geometry.component_to_json(c) for c in self.components]

    @classmethod
    def from_json(cls, geometry: Geometry, data) -> "SOD":
        return cls(geometry, tuple(geometry.component_from_json(c) for c in data))


@dataclass(frozen=True)
class Fact:
    """A certified or asserted statement consumed by a step.

    ``kind`` is ``orthogonal`` (all Ext from ``left`` to ``right`` vanish),
    ``hom-one-dim`` (Ext is one-dimensional in ``degree``) or ``rewrite`` (a
    mutation identity taken on trust).  Oracle-verified facts carry the table.
    """

    kind: str
    left: Component
    right: Component
    status: str
    citation: str = ""
    evidence: Optional[CohTable] = None
    degree: Optional[int] = None
    detail: tuple = ()

    def to_json(self, geometry: Geometry) -> dict:
        out = {
            "kind": self.kind,
            "left": geometry.describe(self.left),
            "right": geometry.describe(self.right),
            "status": self.status,
        }
        if self.citation:
            out["citation"] = self.citation
        if self.evidence is not None:
            out["evidence"] = self.evidence.to_json()
        if self.degree is not None:
            out["degree"] = self.degree
        out.update(dict(self.detail))
        return out


@dataclass(frozen=True)
class Rewrite:
    """Asserted identity ``L_X(O(c*base)) = O(c*base + add)`` for pullback classes.

    Its triangle is ``push_sub(c*base + add)[-1] -> O(c*base) -> O(c*base + add)``.
    """

    through: Component
    base: tuple[int, ...]
    add: tuple[int, ...]
    sub: str
    citation: str


class FactBase:
    """Asserted facts from a script plus a log of everything certified on demand."""

    def __init__(self, geometry: Geometry, asserted=(), rewrites=()):
        self.geometry = geometry
        self.asserted = list(asserted)
        self.rewrites = list(rewrites)
        self.used: list[Fact] = []

    @classmethod
    def from_json(cls, geometry: Geometry, data) -> "FactBase":
        asserted, rewrites = [], []
        for f in data or ():
            kind = f["fact"]
            if kind == "orthogonal":
                asserted.append(
                    Fact(
                        "orthogonal",
                        geometry.component_from_json(f["left"]),
                        geometry.component_from_json(f["right"]),
                        "paper-asserted",
                        f.get("citation", ""),
                    )
                )
            elif kind == "rewrite":
                rewrites.append(
                    Rewrite(
                        geometry.component_from_json(f["through"]),
                        geometry.cls(f["pullback"]),
                        geometry.cls(f["add"]),
                        f["sub"],
                        f.get("citation", ""),
                    )
                )
            else:
                raise ValueError(f"unknown fact kind {kind!r}")
        return cls(geometry, asserted, rewrites)

    def orthogonal(self, left: Component, right: Component) -> Fact:
        """Certify ``Ext^*(left, right) = 0``, by the oracle when both are objects."""
        if left.is_object and right.is_object:
            try:
                table = self.geometry.ext(left.obj, right.obj)
            except NoOracle:
                table = None
            if table is not None and table.is_zero():
                fact = Fact("orthogonal", left, right, "oracle-verified", evidence=table)
                self.used.append(fact)
                return fact
            if table is not None and table.determined:
                raise MissingFact(
                    f"Ext({self.geometry.describe(left)}, {self.geometry.describe(right)}) = {table}, not zero"
                )
        for f in self.asserted:
            if f.left.same_as(left) and f.right.same_as(right):
                self.used.append(f)
                return f
        raise MissingFact(
            f"no certificate that {self.geometry.describe(left)} is orthogonal to {self.geometry.describe(right)}"
        )


# --------------------------------------------------------------------------
# elementary operations


def _check_pair(sod: SOD, k: int):
    if not 0 <= k < len(sod) - 1:
        raise IndexError(f"no adjacent pair at {k} in a decomposition of length {len(sod)}")


def mutate_left(sod: SOD, k: int) -> SOD:
    _check_pair(sod, k)
    a, b = sod[k], sod[k + 1]
    comps = list(sod.components)
    comps[k : k + 2] = [b.wrap(LeftMut(a), sod.geometry), a]
    return sod.replace(comps)


def mutate_right(sod: SOD, k: int) -> SOD:
    _check_pair(sod, k)
    a, b = sod[k], sod[k + 1]
    comps = list(sod.components)
    comps[k : k + 2] = [b, a.wrap(RightMut(b), sod.geometry)]
    return sod.replace(comps)


def transpose(sod: SOD, i: int, j: int, facts: FactBase) -> tuple[SOD, list[Fact]]:
    """Move component ``i`` to position ``j`` past completely orthogonal neighbours."""
    n = len(sod)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise IndexError(f"bad transposition {i} -> {j} in length {n}")
    comps = list(sod.components)
    moving = comps[i]
    used = []
    if j > i:
        for c in comps[i + 1 : j + 1]:
            used.append(facts.orthogonal(moving, c))
    else:
        for c in comps[j:i]:
            used.append(facts.orthogonal(c, moving))
    del comps[i]
    comps.insert(j, moving)
    return sod.replace(comps), used


def serre_rotate(sod: SOD, positions, direction: Optional[str] = None) -> SOD:
    """Move a prefix block to the end twisted by ``-K``, or a suffix block to the front twisted by ``+K``."""
    positions = sorted(int(p) for p in positions)
    n = len(sod)
    if not positions or positions != list(range(positions[0], positions[-1] + 1)) or len(positions) >= n:
        raise ValueError(f"{positions} is not a proper contiguous block")
    is_prefix = positions[0] == 0
    is_suffix = positions[-1] == n - 1
    if direction is None:
        if is_prefix == is_suffix:
            raise ValueError("block must be a prefix or a suffix")
        direction = "to_end" if is_prefix else "to_front"
    geo = sod.geometry
    block = [sod[p] for p in positions]
    rest = [c for p, c in enumerate(sod.components) if p not in positions]
    if direction == "to_end":
        if not is_prefix:
            raise ValueError("only a prefix block moves to the end")
        anti = tuple(-c for c in geo.canonical)
        return sod.replace(rest + [c.twist(anti, geo) for c in block])
    if direction == "to_front":
        if not is_suffix:
            raise ValueError("only a suffix block moves to the front")
        return sod.replace([c.twist(geo.canonical, geo) for c in block] + rest)
    raise ValueError(f"unknown direction {direction!r}")


def twist_sod(sod: SOD, coords) -> SOD:
    """Apply the autoequivalence ``- (x) O(coords)`` to every component."""
    geo = sod.geometry
    return sod.replace([c.twist(coords, geo) for c in sod.components])


# --------------------------------------------------------------------------
# collapse of exceptional mutations


@dataclass(frozen=True)
class Collapse:
    """The identification made by a collapse and the triangle behind it."""

    result: object
    triangle: tuple  # (first, middle, third) with first -> middle -> third
    fact: Fact


def _single_degree(table: CohTable) -> Optional[int]:
    if not table.determined:
        return None
    entries = table.entries
    if len(entries) == 1 and entries[0][1] == 1:
        return entries[0][0]
    return None


def collapse_exceptional_mutation(kind: str, through: Component, target: Component, facts: FactBase) -> Collapse:
    """Identify ``L_X(F)`` (kind ``"L"``) or ``R_X(F)`` (kind ``"R"``) with a simpler object."""
    geo = facts.geometry
    if not target.is_object:
        raise NoCollapseRule(f"{geo.describe(target)} is not a bare object")
    F, s = unshift(target.obj)
    if not through.is_object:
        if kind == "L" and isinstance(F, LineBundle):
            return _rewrite(through, target, F, s, facts)
        raise NoCollapseRule(f"no collapse through {geo.describe(through)}")
    E, _ = unshift(through.obj)
    X = Component.exceptional(E)
    if kind == "R":
        table = geo.ext(F, E)
        d = _single_degree(table)
        if d != 0 or not (isinstance(F, LineBundle) and isinstance(E, LineBundle)):
            raise NoCollapseRule(f"Hom pattern {table} does not give a collapse")
        diff = tuple(e - f for e, f in zip(E.coords, F.coords))
        wit = geo.divisor_witness(diff)
        if wit is None:
            raise NoCollapseRule(f"{geo.fmt(diff)} is not a registered divisor")
        result = geo.push(wit.label, E.coords, s - 1)
        fact = Fact("hom-one-dim", target.stripped(), X, "oracle-verified", evidence=table, degree=0,
                    detail=(("witness", wit.label),))
        facts.used.append(fact)
        return Collapse(result, (result, shift(F, s), shift(E, s)), fact)
    if kind == "L":
        table = geo.ext(E, F)
        d = _single_degree(table)
        if d is None or not isinstance(F, LineBundle):
            raise NoCollapseRule(f"Hom pattern {table} does not give a collapse")
        if isinstance(E, LineBundle) and d == 0:
            diff = tuple(f - e for f, e in zip(F.coords, E.coords))
            wit = geo.divisor_witness(diff)
            if wit is None:
                raise NoCollapseRule(f"{geo.fmt(diff)} is not a registered divisor")
            result = geo.push(wit.label, F.coords, s)
            first = shift(E, s)
        elif isinstance(E, PushforwardLB) and d == 1:
            wit = geo.subvariety(E.sub)
            grown = tuple(f + z for f, z in zip(F.coords, wit.divisor))
            if wit.normal_form(grown) != E.coords:
                raise NoCollapseRule(f"O({geo.fmt(grown)}) does not restrict to the class of {geo.describe_object(E)}")
            result = shift(LineBundle(grown), s)
            first = shift(E, s - 1)
        else:
            raise NoCollapseRule(f"Hom pattern {table} does not give a collapse")
        fact = Fact("hom-one-dim", X, target.stripped(), "oracle-verified", evidence=table, degree=d,
                    detail=(("witness", wit.label),))
        facts.used.append(fact)
        return Collapse(result, (first, shift(F, s), result), fact)
    raise ValueError(f"unknown mutation kind {kind!r}")


def _rewrite(through: Component, target: Component, F: LineBundle, s: int, facts: FactBase) -> Collapse:
    geo = facts.geometry
    for rw in facts.rewrites:
        if not rw.through.same_as(through):
            continue
        c = _multiple(F.coords, rw.base)
        if c is None:
            continue
        grown = tuple(f + a for f, a in zip(F.coords, rw.add))
        result = shift(LineBundle(grown), s)
        fact = Fact("rewrite", through, target.stripped(), "paper-asserted", rw.citation)
        facts.used.append(fact)
        return Collapse(result, (geo.push(rw.sub, grown, -1), shift(F, s), result), fact)
    raise NoCollapseRule(f"no rewrite for mutation through {geo.describe(through)}")


def _multiple(v, base) -> Optional[int]:
    """``c`` with ``v = c * base``, if any."""
    c = None
    for x, b in zip(v, base):
        if b == 0:
            if x != 0:
                return None
            continue
        if x % b:
            return None
        q = x // b
        if c is not None and q != c:
            return None
        c = q
    return 0 if c is None else c


def collapse(sod: SOD, k: int, facts: FactBase) -> tuple[SOD, Collapse]:
    """Replace component ``k``, a single mutation of an object, by the collapsed object."""
    comp = sod[k]
    if comp.is_abstract or len(comp.functor) != 1 or not isinstance(comp.functor[0], (LeftMut, RightMut)):
        raise NoCollapseRule(f"{sod.geometry.describe(comp)} is not a single mutation of an object")
    atom = comp.functor[0]
    kind = "L" if isinstance(atom, LeftMut) else "R"
    col = collapse_exceptional_mutation(kind, atom.through, Component.exceptional(comp.base), facts)
    comps = list(sod.components)
    comps[k] = Component.exceptional(col.result)
    return sod.replace(comps), col


# --------------------------------------------------------------------------
# numerical shadows


def hilbert_shadow(geometry: Geometry, obj, ts) -> list[int]:
    """``chi(obj (x) O(tH))`` for each ``t``, with shifts contributing signs."""
    if isinstance(obj, Component):
        if not obj.is_object:
            raise NoOracle(f"{geometry.describe(obj)} has no numerical shadow")
        obj = obj.obj
    return [geometry.chi_twisted(obj, t) for t in ts]


def shadow_additivity(geometry: Geometry, triangle, ts=range(-3, 4)) -> dict:
    """Check ``chi(middle) = chi(first) + chi(third)`` along the polarisation."""
    first, middle, third = (hilbert_shadow(geometry, o, ts) for o in triangle)
    ok = all(m == a + b for a, m, b in zip(first, middle, third))
    return {"t": list(ts), "first": first, "middle": middle, "third": third, "ok": ok}
