"""Exact field arithmetic: finite fields ``F_{p^k}`` by lookup tables, and the rationals.

Elements of ``F_{p^k}`` are integers ``0 .. p^k - 1``; the base-``p`` digits of an
integer are the coefficients of a polynomial in a root of a fixed monic
irreducible polynomial.  Every operation accepts plain integers or numpy integer
arrays, so whole batches of points are handled by fancy indexing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

__all__ = ["FieldSpec", "FiniteField", "RationalField", "make_field", "MAX_FIELD_SIZE"]

MAX_FIELD_SIZE = 4096


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class FieldSpec:
    """``q`` prime and extension degree ``k``; ``q = 0`` stands for the rationals."""

    q: int = 7
    k: int = 1

    def __post_init__(self):
        if self.q == 0:
            if self.k != 1:
                raise ValueError("the rationals have no extension degree")
            return
        if not _is_prime(self.q):
            raise ValueError(f"characteristic {self.q} is not prime")
        if self.k < 1:
            raise ValueError("extension degree must be >= 1")
        if self.q**self.k > MAX_FIELD_SIZE:
            raise ValueError(f"field of size {self.q}^{self.k} exceeds {MAX_FIELD_SIZE}")

    @property
    def size(self) -> int:
        return self.q**self.k if self.q else 0

    def to_json(self) -> dict:
        return {"q": self.q, "k": self.k}

    def __str__(self):
        if self.q == 0:
            return "Q"
        return f"F_{self.q}" if self.k == 1 else f"F_{self.q}^{self.k}"


def _polymulmod(a, b, mod, p):
    """Product of coefficient lists (low degree first) modulo a monic polynomial."""
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
    return prod[:k] + [0] * (k - len(prod[:k]))


def _irreducible(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree ``k`` over ``F_p`` (low degree first)."""
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        mod = tuple(reversed(tail)) + (1,)
        if mod[0] == 0:
            continue
        if not _has_factor(mod, p):
            return mod
    raise ArithmeticError(f"no irreducible polynomial of degree {k} over F_{p}")


def _has_factor(mod, p) -> bool:
    k = len(mod) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            if _polymod(list(mod), div, p) == [0] * d:
                return True
    return False


def _polymod(a, b, p):
    a = a[:]
    db = len(b) - 1
    for d in range(len(a) - 1, db - 1, -1):
        c = a[d]
        if c:
            for i in range(db + 1):
                a[d - db + i] = (a[d - db + i] - c * b[i]) % p
    return a[:db]


class FiniteField:
    """``F_{p^k}`` with addition, multiplication and inversion tables."""

    def __init__(self, p: int, k: int = 1):
        self.spec = FieldSpec(p, k)
        self.p, self.k = p, k
        self.size = p**k
        self.zero, self.one = 0, 1
        self.modulus = _irreducible(p, k)
        q = self.size
        digits = np.array([[(a // p**i) % p for i in range(k)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        self.add_t = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int64)
        self.neg_t = (((-digits) % p) @ weights).astype(np.int64)
        if k == 1:
            r = np.arange(q, dtype=np.int64)
            self.mul_t = (r[:, None] * r[None, :]) % p
        else:
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    c = _polymulmod(list(digits[a]), list(digits[b]), self.modulus, p)
                    mul[a, b] = mul[b, a] = int(np.dot(c, weights))
            self.mul_t = mul
        self.inv_t = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv_t[a] = int(np.nonzero(self.mul_t[a] == 1)[0][0])

    def __repr__(self):
        return f"FiniteField({self.p}, {self.k})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    @staticmethod
    def _out(x):
        return int(x) if np.ndim(x) == 0 else x

    def add(self, a, b):
        return self._out(self.add_t[a, b])

    def sub(self, a, b):
        return self._out(self.add_t[a, self.neg_t[b]])

    def mul(self, a, b):
        return self._out(self.mul_t[a, b])

    def neg(self, a):
        return self._out(self.neg_t[a])

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._out(self.inv_t[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elem(self, n: int) -> int:
        """Image of the integer ``n`` (in the prime field)."""
        return int(n) % self.p

    def pow(self, a, e: int):
        out = np.ones_like(np.asarray(a)) if np.ndim(a) else 1
        for _ in range(e):
            out = self.mul_t[out, a]
        return self._out(out)

    def is_zero(self, a) -> bool:
        return a == 0

    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int64)

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.size, dtype=np.int64)

    def random(self, rng: np.random.Generator, shape=None):
        return self._out(rng.integers(0, self.size, size=shape))

    def fmt(self, a) -> str:
        return str(int(a))

    def parse(self, text) -> int:
        a = int(text)
        if not 0 <= a < self.size:
            raise ValueError(f"{a} is not an element of {self.spec}")
        return a


class RationalField:
    """The rationals with :class:`fractions.Fraction` elements."""

    spec = FieldSpec(0, 1)
    zero = Fraction(0)
    one = Fraction(1)
    p = 0

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def elem(self, n) -> Fraction:
        return Fraction(n)

    def pow(self, a, e: int):
        return Fraction(a) ** e

    def is_zero(self, a) -> bool:
        return a == 0

    def random(self, rng: np.random.Generator, shape=None, bound: int = 9):
        if shape is None:
            return Fraction(int(rng.integers(-bound, bound + 1)))
        vals = rng.integers(-bound, bound + 1, size=shape)
        return np.vectorize(Fraction, otypes=[object])(vals)

    def fmt(self, a) -> str:
        return str(Fraction(a))

    def parse(self, text) -> Fraction:
        return Fraction(text)


Field = Union[FiniteField, RationalField]


@lru_cache(maxsize=None)
def _finite(p: int, k: int) -> FiniteField:
    return FiniteField(p, k)


def make_field(spec: Union[FieldSpec, int, None] = None, k: int = 1) -> Field:
    """Field for a spec, or for ``q`` and ``k``; ``q = 0`` gives the rationals."""
    if spec is None:
        spec = FieldSpec()
    elif isinstance(spec, int):
        spec = FieldSpec(spec, k)
    if spec.q == 0:
        return RationalField()
    return _finite(spec.q, spec.k)
