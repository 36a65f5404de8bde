"""Exact integer arithmetic in Picard groups of the spaces used around a cubic fourfold.

A :class:`PicModel` names a free basis of divisor classes, a few derived classes
written in that basis, and the canonical class.  :func:`express` turns a formal
integer combination of labels into coordinates; everything is plain Python
integers, so coefficients never overflow and nothing is reduced modulo anything.

>>> m = get_model("plane-case")
>>> express(m, "-3H + D").coords
(-2, -1)
>>> verify_relation(get_model("singular-case"), "D", "2H - 3Q")
True
"""

from __future__ import annotations

import json
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Union

__all__ = [
    "PicModel",
    "DivisorClass",
    "UnknownLabel",
    "express",
    "verify_relation",
    "builtin_models",
    "get_model",
]


class UnknownLabel(KeyError):
    """A class label is neither a basis label nor a derived label of the model."""


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*\*?\s*([A-Za-z~][A-Za-z0-9_~]*'*)?\s*")


def _parse(text: str) -> dict[str, int]:
    """Parse ``"-3H + D"`` into ``{"H": -3, "D": 1}``; a bare ``"0"`` is the zero class."""
    text = text.strip()
    if not text:
        raise ValueError("empty class expression")
    if re.fullmatch(r"[+-]?\s*\d+", text):
        if int(text.replace(" ", "")) != 0:
            raise ValueError(f"a bare integer is not a divisor class: {text!r}")
        return {}
    out: dict[str, int] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse class expression {text!r} at {pos}")
        sign, num, label = m.groups()
        if label is None:
            raise ValueError(f"missing label in {text!r} at {pos}")
        if sign is None and not first:
            raise ValueError(f"missing operator before {label!r} in {text!r}")
        coeff = int(num) if num is not None else 1
        if sign == "-":
            coeff = -coeff
        out[label] = out.get(label, 0) + coeff
        pos = m.end()
        first = False
    return out


@dataclass(frozen=True)
class PicModel:
    """A free abelian group with named basis, derived classes and a canonical class.

    ``derived`` maps a label to its integer coordinates over ``basis``.  The label
    ``"K"`` always resolves to the canonical class unless the model defines it.
    """

    name: str
    basis: tuple[str, ...]
    derived: tuple[tuple[str, tuple[int, ...]], ...] = ()
    canonical: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if isinstance(self.derived, Mapping):
            derived = tuple((k, tuple(int(c) for c in v)) for k, v in self.derived.items())
        else:
            derived = tuple((k, tuple(int(c) for c in v)) for k, v in self.derived)
        object.__setattr__(self, "derived", derived)
        object.__setattr__(self, "canonical", tuple(int(c) for c in self.canonical))
        if len(set(self.basis)) != len(self.basis):
            raise ValueError(f"basis labels of {self.name} are not distinct")
        labels = set(self.basis)
        for label, coords in derived:
            if label in labels:
                raise ValueError(f"derived label {label!r} clashes with another label")
            if len(coords) != self.rank:
                raise ValueError(f"derived class {label!r} has wrong length")
            labels.add(label)
        if len(self.canonical) != self.rank:
            raise ValueError(f"canonical class of {self.name} has wrong length")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.basis + tuple(k for k, _ in self.derived)

    def coords_of(self, label: str) -> tuple[int, ...]:
        if label in self.basis:
            i = self.basis.index(label)
            return tuple(int(j == i) for j in range(self.rank))
        for k, v in self.derived:
            if k == label:
                return v
        if label == "K":
            return self.canonical
        raise UnknownLabel(f"{label!r} is not a class of {self.name} (labels: {', '.join(self.labels)})")

    def cls(self, expr: "ClassLike") -> "DivisorClass":
        return express(self, expr)

    def zero(self) -> "DivisorClass":
        return DivisorClass(self, (0,) * self.rank)

    @property
    def K(self) -> "DivisorClass":
        return DivisorClass(self, self.canonical)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "basis": list(self.basis),
            "derived": {k: list(v) for k, v in self.derived},
            "canonical": list(self.canonical),
        }

    @classmethod
    def from_json(cls, data: Union[str, Mapping]) -> "PicModel":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            name=data["name"],
            basis=tuple(data["basis"]),
            derived=tuple((k, tuple(v)) for k, v in data.get("derived", {}).items()),
            canonical=tuple(data["canonical"]),
        )


@dataclass(frozen=True)
class DivisorClass:
    model: PicModel = field(compare=False, repr=False)
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if len(self.coords) != self.model.rank:
            raise ValueError(f"class has {len(self.coords)} coordinates, {self.model.name} has rank {self.model.rank}")

    def __eq__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.model.name == other.model.name and self.coords == other.coords

    def __hash__(self):
        return hash((self.model.name, self.coords))

    def _check(self, other: "DivisorClass"):
        if other.model.name != self.model.name:
            raise ValueError(f"classes live in different models ({self.model.name}, {other.model.name})")

    def __add__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        self._check(other)
        return DivisorClass(self.model, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        self._check(other)
        return DivisorClass(self.model, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return DivisorClass(self.model, tuple(-a for a in self.coords))

    def __mul__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        return DivisorClass(self.model, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return format_coords(self.model, self.coords)


def format_coords(model: PicModel, coords) -> str:
    """Render coordinates as ``2h+H``-style text over the model basis."""
    parts = []
    for c, label in zip(coords, model.basis):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, mag + label))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += sign + body
    return text


ClassLike = Union[str, Mapping, DivisorClass]


def express(model: PicModel, expr: ClassLike) -> DivisorClass:
    """Coordinates of a formal combination of basis and derived labels.

    ``expr`` is a string such as ``"2H - 3Q"``, a mapping ``{label: coefficient}``
    or an existing class of the same model.
    """
    if isinstance(expr, DivisorClass):
        if expr.model.name != model.name:
            raise ValueError(f"class of {expr.model.name} used in {model.name}")
        return expr
    terms = _parse(expr) if isinstance(expr, str) else dict(expr)
    acc = [0] * model.rank
    for label, coeff in terms.items():
        coeff = int(coeff)
        for i, c in enumerate(model.coords_of(label)):
            acc[i] += coeff * c
    return DivisorClass(model, tuple(acc))


def verify_relation(model: PicModel, lhs: ClassLike, rhs: ClassLike) -> bool:
    return express(model, lhs) == express(model, rhs)


def _projective(n: int) -> PicModel:
    return PicModel(f"P{n}", ("H",), (), (-(n + 1),))


# Blowups of P^5 along a plane and at a point, both written as projective bundles:
# basis (relative O(1), pullback of the base hyperplane).
_BUILTIN = (
    _projective(1),
    _projective(2),
    _projective(3),
    _projective(4),
    _projective(5),
    PicModel("Y", ("H",), (), (-3,)),
    PicModel("plane-ambient", ("H'", "h'"), (("D'", (1, -1)), ("Y'", (2, 1))), (-4, -2)),
    PicModel("plane-case", ("H", "h"), (("D", (1, -1)),), (-2, -1)),
    PicModel("singular-ambient", ("H'", "h'"), (("Q'", (1, -1)), ("Y'", (1, 2))), (-2, -4)),
    PicModel("singular-case", ("h", "D"), (("H", (3, -1)), ("Q", (2, -1))), (-5, 1)),
)


def builtin_models() -> tuple[PicModel, ...]:
    return _BUILTIN


def get_model(name: str) -> PicModel:
    for m in _BUILTIN:
        if m.name == name:
            return m
    raise KeyError(f"no built-in Picard model named {name!r}")
