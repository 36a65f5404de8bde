"""Symbolic objects, functor words and components of a semiorthogonal decomposition.

Classes of line bundles are stored as coordinate tuples over the basis of the
ambient Picard model; a :class:`Geometry` (see :mod:`.geometry`) supplies the
model whenever classes have to be parsed, printed or twisted.

A component is a *base* wrapped in a word of functor atoms (outermost first).
The base is either an exceptional object or the label of an abstract category.
Normal form of the word:

* a twist in front of a mutation passes through it, twisting the subscript
  (``T_t o M_X = M_{X(t)} o T_t``), so twists collect next to the base;
* consecutive twists merge, zero twists vanish;
* a twist that reaches an object base is absorbed into the object;
* adjacent ``L_X R_X`` and ``R_X L_X`` cancel;
* mutation subscripts forget shifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "LineBundle",
    "PushforwardLB",
    "OpaqueObject",
    "Shift",
    "ObjectExpr",
    "shift",
    "unshift",
    "LeftMut",
    "RightMut",
    "Twist",
    "Named",
    "Atom",
    "Component",
    "normalize_word",
    "ABSTRACT_BASES",
]

# Labels an abstract component may carry as its base.
ABSTRACT_BASES = frozenset(
    {
        "D^b(P(B),B_0)",
        "A_Y",
        "sigma^*(A_Y)",
        "D^b(S)",
        "~A_Y",
    }
)


def _vec(coords) -> tuple[int, ...]:
    return tuple(int(c) for c in coords)


def _add(a, b) -> tuple[int, ...]:
    if len(a) != len(b):
        raise ValueError("classes of different rank")
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class LineBundle:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", _vec(self.coords))


@dataclass(frozen=True)
class PushforwardLB:
    """Pushforward along ``map`` of a line bundle on the subvariety ``sub``.

    ``coords`` is an ambient class normalised by the geometry so that two
    classes with the same restriction to ``sub`` get the same coordinates.
    """

    map: str
    sub: str
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", _vec(self.coords))


@dataclass(frozen=True)
class OpaqueObject:
    """An exceptional object known only by name (for example a spinor bundle), with a twist."""

    label: str
    twist: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "twist", _vec(self.twist))


@dataclass(frozen=True)
class Shift:
    obj: Union[LineBundle, PushforwardLB, OpaqueObject]
    n: int

    def __post_init__(self):
        if isinstance(self.obj, Shift):
            raise ValueError("use shift() to compose shifts")
        if self.n == 0:
            raise ValueError("use shift() for zero shifts")


ObjectExpr = Union[LineBundle, PushforwardLB, OpaqueObject, Shift]


def shift(obj: ObjectExpr, n: int) -> ObjectExpr:
    """``obj[n]`` with shifts added up and ``[0]`` dropped."""
    core, m = unshift(obj)
    total = m + int(n)
    return core if total == 0 else Shift(core, total)


def unshift(obj: ObjectExpr) -> tuple[ObjectExpr, int]:
    if isinstance(obj, Shift):
        return obj.obj, obj.n
    return obj, 0


@dataclass(frozen=True)
class LeftMut:
    through: "Component"


@dataclass(frozen=True)
class RightMut:
    through: "Component"


@dataclass(frozen=True)
class Twist:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", _vec(self.coords))


@dataclass(frozen=True)
class Named:
    label: str


Atom = Union[LeftMut, RightMut, Twist, Named]


@dataclass(frozen=True)
class Component:
    """A base (object or abstract label) under a functor word, outermost atom first.

    Build components with :meth:`exceptional`, :meth:`abstract` and :meth:`wrap`;
    these keep the word in normal form.  Equality is syntactic on the normal
    form and ignores shifts.
    """

    base: Union[ObjectExpr, str]
    functor: tuple = ()

    @classmethod
    def exceptional(cls, obj: ObjectExpr) -> "Component":
        return cls(obj, ())

    @classmethod
    def abstract(cls, label: str, functor=(), twister=None) -> "Component":
        if label not in ABSTRACT_BASES:
            raise ValueError(f"unregistered abstract category {label!r}")
        return cls(label, normalize_word(tuple(functor), twister))

    @property
    def is_abstract(self) -> bool:
        return isinstance(self.base, str)

    @property
    def is_object(self) -> bool:
        """True for a bare exceptional object (no functor word left)."""
        return not self.is_abstract and not self.functor

    @property
    def obj(self) -> ObjectExpr:
        if not self.is_object:
            raise ValueError("component is not a bare object")
        return self.base

    def wrap(self, atom: Atom, twister) -> "Component":
        """Apply ``atom`` on the outside and renormalise."""
        return self._rebuild((atom,) + self.functor, twister)

    def twist(self, coords, twister) -> "Component":
        return self.wrap(Twist(coords), twister)

    def _rebuild(self, word, twister) -> "Component":
        word = normalize_word(tuple(word), twister)
        base = self.base
        if not isinstance(base, str) and word and isinstance(word[-1], Twist):
            base = twister.twist_object(base, word[-1].coords)
            word = word[:-1]
        return Component(base, word)

    def key(self):
        """Hashable identity ignoring shifts everywhere."""
        base = self.base if isinstance(self.base, str) else unshift(self.base)[0]
        return (base, tuple(_atom_key(a) for a in self.functor))

    def stripped(self) -> "Component":
        """The same component with the base shift removed."""
        if isinstance(self.base, str):
            return self
        return Component(unshift(self.base)[0], self.functor)

    def same_as(self, other: "Component") -> bool:
        return self.key() == other.key()


def _atom_key(a: Atom):
    if isinstance(a, (LeftMut, RightMut)):
        return (type(a).__name__, a.through.key())
    return a


def _twist_atom(a: Atom, t, twister) -> Atom:
    if isinstance(a, LeftMut):
        return LeftMut(a.through.twist(t, twister))
    if isinstance(a, RightMut):
        return RightMut(a.through.twist(t, twister))
    return a


def normalize_word(word: tuple, twister=None) -> tuple:
    """Rewrite a functor word (outermost first) to normal form.

    ``twister`` twists mutation subscripts; it is only needed when a twist has to
    pass a mutation.
    """
    word = [(_strip_subscript(a)) for a in word]
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(word):
            a = word[i]
            if isinstance(a, Twist) and not any(a.coords):
                del word[i]
                changed = True
                continue
            if i + 1 < len(word):
                b = word[i + 1]
                if isinstance(a, Twist) and isinstance(b, Twist):
                    word[i : i + 2] = [Twist(_add(a.coords, b.coords))]
                    changed = True
                    continue
                if isinstance(a, Twist) and isinstance(b, (LeftMut, RightMut)):
                    if twister is None:
                        raise ValueError("a geometry is needed to move a twist past a mutation")
                    word[i : i + 2] = [_twist_atom(b, a.coords, twister), a]
                    changed = True
                    continue
                if _cancels(a, b):
                    del word[i : i + 2]
                    changed = True
                    i = max(i - 1, 0)
                    continue
            i += 1
    return tuple(word)


def _strip_subscript(a: Atom) -> Atom:
    if isinstance(a, LeftMut):
        return LeftMut(a.through.stripped())
    if isinstance(a, RightMut):
        return RightMut(a.through.stripped())
    return a


def _cancels(a: Atom, b: Atom) -> bool:
    pair = {type(a), type(b)}
    return pair == {LeftMut, RightMut} and a.through.same_as(b.through)
