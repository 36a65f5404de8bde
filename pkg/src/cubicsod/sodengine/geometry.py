"""The geometric context of a replay: Picard model, cohomology oracle and subvarieties."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..cohomology import CohTable, DivisorIn, coh_divisor_restriction, euler_characteristic, line_cohomology
from ..piclattice import PicModel, express, format_coords
from .terms import (
    Component,
    LeftMut,
    LineBundle,
    Named,
    OpaqueObject,
    PushforwardLB,
    RightMut,
    Twist,
    shift,
    unshift,
)

__all__ = ["Subvariety", "Geometry", "NoOracle"]


class NoOracle(LookupError):
    """The cohomology oracle has no rule for this pair of objects."""


@dataclass(frozen=True)
class Subvariety:
    """An effective divisor with an embedding label.

    ``normalize`` is an integer matrix (rows over the ambient basis) applied to
    the class of a line bundle on the divisor; it must send two ambient classes
    to the same vector exactly when their restrictions agree.
    """

    label: str
    map: str
    divisor: tuple[int, ...]
    normalize: tuple[tuple[int, ...], ...]

    def normal_form(self, coords) -> tuple[int, ...]:
        return tuple(sum(r[j] * coords[j] for j in range(len(coords))) for r in self.normalize)


@dataclass(frozen=True)
class Geometry:
    name: str
    space: DivisorIn
    subvarieties: tuple[Subvariety, ...]
    polarization: tuple[int, ...]

    @property
    def model(self) -> PicModel:
        return self.space.model

    @property
    def canonical(self) -> tuple[int, ...]:
        return self.model.canonical

    def cls(self, expr) -> tuple[int, ...]:
        if isinstance(expr, (tuple, list)):
            return tuple(int(c) for c in expr)
        return express(self.model, expr).coords

    def fmt(self, coords) -> str:
        return format_coords(self.model, coords)

    def subvariety(self, label: str) -> Subvariety:
        for s in self.subvarieties:
            if s.label == label:
                return s
        raise KeyError(f"no subvariety {label!r} in {self.name}")

    def divisor_witness(self, coords) -> Optional[Subvariety]:
        coords = tuple(coords)
        for s in self.subvarieties:
            if s.divisor == coords:
                return s
        return None

    # --- objects -----------------------------------------------------------

    def line(self, expr) -> LineBundle:
        return LineBundle(self.cls(expr))

    def push(self, label: str, expr, n: int = 0):
        sub = self.subvariety(label)
        return shift(PushforwardLB(sub.map, label, sub.normal_form(self.cls(expr))), n)

    def twist_object(self, obj, coords):
        core, n = unshift(obj)
        if isinstance(core, LineBundle):
            new = LineBundle(tuple(a + b for a, b in zip(core.coords, coords)))
        elif isinstance(core, PushforwardLB):
            sub = self.subvariety(core.sub)
            new = PushforwardLB(core.map, core.sub, sub.normal_form(tuple(a + b for a, b in zip(core.coords, coords))))
        elif isinstance(core, OpaqueObject):
            base = core.twist or (0,) * self.model.rank
            new = OpaqueObject(core.label, tuple(a + b for a, b in zip(base, coords)))
        else:
            raise TypeError(f"cannot twist {obj!r}")
        return shift(new, n)

    # --- oracle ------------------------------------------------------------

    def coh_on(self, label: str, coords) -> CohTable:
        """``H^*(Z, O_Z(L))`` for a registered divisor ``Z``, via the restriction sequence."""
        sub = self.subvariety(label)
        return coh_divisor_restriction(self.space, sub.divisor, tuple(coords))

    def ext(self, a, b) -> CohTable:
        """``Ext^*(a, b)`` between exceptional objects (line bundles or pushforwards)."""
        a, m = unshift(a)
        b, n = unshift(b)
        if isinstance(a, LineBundle) and isinstance(b, LineBundle):
            table = line_cohomology(self.space, tuple(y - x for x, y in zip(a.coords, b.coords)))
        elif isinstance(a, LineBundle) and isinstance(b, PushforwardLB):
            table = self.coh_on(b.sub, tuple(y - x for x, y in zip(a.coords, b.coords)))
        elif isinstance(a, PushforwardLB) and isinstance(b, LineBundle):
            z = self.subvariety(a.sub).divisor
            table = self.coh_on(a.sub, tuple(y - x + w for x, y, w in zip(a.coords, b.coords, z))).shift(1)
        else:
            raise NoOracle(f"no Ext rule for {self.describe_object(a)} and {self.describe_object(b)}")
        return table.shift(m - n)

    def chi_twisted(self, obj, t: int) -> int:
        """``chi(obj (x) O(tH))`` for the polarisation ``H``."""
        core, n = unshift(obj)
        tw = tuple(t * c for c in self.polarization)
        if isinstance(core, LineBundle):
            val = euler_characteristic(self.space, tuple(a + b for a, b in zip(core.coords, tw)))
        elif isinstance(core, PushforwardLB):
            z = self.subvariety(core.sub).divisor
            top = tuple(a + b for a, b in zip(core.coords, tw))
            val = euler_characteristic(self.space, top) - euler_characteristic(
                self.space, tuple(a - c for a, c in zip(top, z))
            )
        else:
            raise NoOracle(f"no numerical shadow for {self.describe_object(core)}")
        return -val if n % 2 else val

    # --- text and JSON -------------------------------------------------------

    def describe_object(self, obj) -> str:
        core, n = unshift(obj)
        if isinstance(core, LineBundle):
            text = f"O({self.fmt(core.coords)})" if any(core.coords) else "O"
        elif isinstance(core, PushforwardLB):
            inner = f"O_{core.sub}({self.fmt(core.coords)})" if any(core.coords) else f"O_{core.sub}"
            text = f"{core.map}_*{inner}"
        elif isinstance(core, OpaqueObject):
            text = core.label + (f"({self.fmt(core.twist)})" if any(core.twist) else "")
        else:
            raise TypeError(obj)
        return text + (f"[{n}]" if n else "")

    def describe(self, comp: Component) -> str:
        base = comp.base if comp.is_abstract else self.describe_object(comp.base)
        if not comp.functor:
            return base
        word = " o ".join(self._describe_atom(a) for a in comp.functor)
        return f"{word} ({base})"

    def _describe_atom(self, a) -> str:
        if isinstance(a, LeftMut):
            return f"L[{self.describe(a.through)}]"
        if isinstance(a, RightMut):
            return f"R[{self.describe(a.through)}]"
        if isinstance(a, Twist):
            return f"T[{self.fmt(a.coords)}]"
        return a.label

    def object_to_json(self, obj) -> dict:
        core, n = unshift(obj)
        if isinstance(core, LineBundle):
            out = {"O": self.fmt(core.coords)}
        elif isinstance(core, PushforwardLB):
            out = {"push": core.sub, "map": core.map, "O": self.fmt(core.coords)}
        elif isinstance(core, OpaqueObject):
            out = {"label": core.label}
            if any(core.twist):
                out["O"] = self.fmt(core.twist)
        else:
            raise TypeError(obj)
        if n:
            out["shift"] = n
        return out

    def object_from_json(self, data: dict):
        n = int(data.get("shift", 0))
        if "label" in data:
            tw = self.cls(data["O"]) if "O" in data else ()
            return shift(OpaqueObject(data["label"], tw), n)
        if "push" in data:
            sub = self.subvariety(data["push"])
            if data.get("map", sub.map) != sub.map:
                raise ValueError(f"{data['push']} embeds by {sub.map}, not {data['map']}")
            return self.push(data["push"], data.get("O", "0"), n)
        if "O" in data:
            return shift(self.line(data["O"]), n)
        raise ValueError(f"not an object: {data!r}")

    def component_to_json(self, comp: Component) -> dict:
        if comp.is_abstract:
            out = {"abstract": comp.base}
        else:
            out = self.object_to_json(comp.base)
        if comp.functor:
            out["functor"] = [self._atom_to_json(a) for a in comp.functor]
        return out

    def _atom_to_json(self, a) -> dict:
        if isinstance(a, LeftMut):
            return {"L": self.component_to_json(a.through)}
        if isinstance(a, RightMut):
            return {"R": self.component_to_json(a.through)}
        if isinstance(a, Twist):
            return {"T": self.fmt(a.coords)}
        return {"F": a.label}

    def component_from_json(self, data: dict) -> Component:
        word = tuple(self._atom_from_json(a) for a in data.get("functor", ()))
        if "abstract" in data:
            return Component.abstract(data["abstract"], word, self)
        comp = Component.exceptional(self.object_from_json(data))
        return comp._rebuild(word, self) if word else comp

    def _atom_from_json(self, data: dict):
        if len(data) != 1:
            raise ValueError(f"functor atom must have one key: {data!r}")
        (kind, val), = data.items()
        if kind == "L":
            return LeftMut(self.component_from_json(val))
        if kind == "R":
            return RightMut(self.component_from_json(val))
        if kind == "T":
            return Twist(self.cls(val))
        if kind == "F":
            return Named(val)
        raise ValueError(f"unknown functor atom {kind!r}")

