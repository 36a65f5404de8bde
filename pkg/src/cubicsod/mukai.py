"""Twisted Mukai lattices of a degree-2 K3 surface and the parity obstruction.

Vectors are written in the basis ``(2 + 2B, h, p)`` of the twisted lattice (or
``(1, h, p)`` for the untwisted one).  The Euler form of a twisted lattice is::

    [[8 - 4 B^2, -2 Bh, 2],
     [-2 Bh,      -2,   0],
     [2,           0,   0]]

A *Mukai pair* is ``(v1, v2)`` with ``chi(v1, v2) = 1`` and ``chi(v2, v2) = 0``;
structure sheaf and point class give one on an untwisted K3.  When ``{Bh} =
{B^2} = 1/2`` every isotropic vector has even ``h``-coordinate, every other Gram
entry is even, so ``chi(-, v2)`` only takes even values and no pair exists.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Iterator, Optional

import numpy as np

from .cohomology import ProjectiveSpace, SplitBundle, coh_split, exterior_power

__all__ = [
    "BData",
    "TwistedMukaiVector",
    "EulerLattice",
    "CycleClass",
    "CounterexampleFound",
    "ParityReport",
    "frac",
    "gram_twisted",
    "gram_untwisted",
    "null_vectors",
    "iter_pairs",
    "pair_search",
    "pair_search_naive",
    "parity_certificate",
    "b_invariance",
    "b0_summands",
    "chi_B0",
    "chi_B0_bott",
    "chi_P2",
    "hecke_parity",
    "delta_parity",
    "cycle_product",
    "search_report",
]

HALF = Fraction(1, 2)


def frac(t) -> Fraction:
    """Fractional part ``t - floor(t)`` of a rational number."""
    t = Fraction(t)
    return t - floor(t)


@dataclass(frozen=True)
class BData:
    """The intersection numbers ``Bh`` and ``B^2`` of a B-field lift (half-integers)."""

    bh: Fraction = HALF
    bsq: Fraction = HALF

    def __post_init__(self):
        bh, bsq = Fraction(self.bh), Fraction(self.bsq)
        if (2 * bh).denominator != 1 or (2 * bsq).denominator != 1:
            raise ValueError(f"Bh and B^2 must lie in (1/2)Z, got {bh}, {bsq}")
        object.__setattr__(self, "bh", bh)
        object.__setattr__(self, "bsq", bsq)


@dataclass(frozen=True)
class TwistedMukaiVector:
    x: int
    y: int
    z: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class EulerLattice:
    gram: tuple[tuple[int, ...], ...]
    tag: str
    b: Optional[BData] = field(default=None, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(c) for c in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        if len(g) != 3 or any(len(r) != 3 for r in g):
            raise ValueError("Euler lattice must have rank 3")
        if any(g[i][j] != g[j][i] for i in range(3) for j in range(3)):
            raise ValueError("Gram matrix is not symmetric")
        if self.tag not in ("twisted", "untwisted"):
            raise ValueError(f"unknown lattice tag {self.tag!r}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64)

    def chi(self, v, w) -> int:
        v = _vec(v)
        w = _vec(w)
        return sum(v[i] * self.gram[i][j] * w[j] for i in range(3) for j in range(3))

    def odd_entries(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(3) for j in range(3) if self.gram[i][j] % 2]

    def to_json(self) -> dict:
        out = {"tag": self.tag, "gram": [list(r) for r in self.gram]}
        if self.b is not None:
            out["bh"] = str(self.b.bh)
            out["bsq"] = str(self.b.bsq)
        return out


def _vec(v) -> tuple[int, int, int]:
    if isinstance(v, TwistedMukaiVector):
        return v.as_tuple()
    return tuple(int(c) for c in v)


def gram_twisted(b: BData = BData()) -> EulerLattice:
    entries = (8 - 4 * b.bsq, -2 * b.bh)
    if any(e.denominator != 1 for e in entries):
        raise ValueError("Gram entries are not integral")
    a, c = (int(e) for e in entries)
    return EulerLattice(((a, c, 2), (c, -2, 0), (2, 0, 0)), "twisted", b)


def gram_untwisted() -> EulerLattice:
    """Mukai pairing ``r1 s2 - 2 d1 d2 + s1 r2`` on ``(r, d, s)``."""
    return EulerLattice(((0, 0, 1), (0, -2, 0), (1, 0, 0)), "untwisted")


# --------------------------------------------------------------------------
# searches


def _box(n: int, lead=None) -> np.ndarray:
    """All vectors with entries in ``[-n, n]`` in lexicographic order; optionally fix the first entry."""
    r = np.arange(-n, n + 1, dtype=np.int64)
    if lead is None:
        grid = np.stack(np.meshgrid(r, r, r, indexing="ij"), axis=-1)
    else:
        grid = np.stack(np.meshgrid(np.array([lead], dtype=np.int64), r, r, indexing="ij"), axis=-1)
    return grid.reshape(-1, 3)


def null_vectors(lattice: EulerLattice, n: int) -> np.ndarray:
    """Isotropic vectors (``chi(v, v) = 0``) in the box, in lexicographic order, zero included."""
    if n < 0:
        raise ValueError("box size must be nonnegative")
    v = _box(n)
    q = np.einsum("ij,jk,ik->i", v, lattice.matrix, v)
    return v[q == 0]


def _useful_nulls(lattice: EulerLattice, n: int, prune: bool = True):
    """Isotropic ``v2`` whose functional ``chi(-, v2)`` can reach 1 (gcd of ``G v2`` is 1)."""
    nulls = null_vectors(lattice, n)
    rows = nulls @ lattice.matrix.T
    if not prune:
        return nulls, rows
    keep = np.gcd.reduce(np.abs(rows), axis=1) == 1
    return nulls[keep], rows[keep]


def _hits_for_lead(args):
    """For one leading coordinate of ``v1``: all (v1 index, v2 index) hits, or the first only."""
    n, lead, rows, first_only = args
    v1 = _box(n, lead)
    out = []
    for start in range(0, len(v1), 512):
        block = v1[start : start + 512] @ rows.T
        ii, jj = np.nonzero(block == 1)
        if len(ii):
            if first_only:
                k = np.lexsort((jj, ii))[0]
                return [(start + int(ii[k]), int(jj[k]))]
            out.extend((start + int(i), int(j)) for i, j in zip(ii, jj))
    return out


def iter_pairs(lattice: EulerLattice, n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All Mukai pairs in the box, ordered lexicographically by ``(v1, v2)``."""
    if n < 1:
        return
    nulls, rows = _useful_nulls(lattice, n)
    if not len(nulls):
        return
    for lead in range(-n, n + 1):
        hits = _hits_for_lead((n, lead, rows, False))
        hits.sort()
        v1s = _box(n, lead)
        for i, j in hits:
            yield tuple(int(c) for c in v1s[i]), tuple(int(c) for c in nulls[j])


def pair_search(lattice: EulerLattice, n: int, workers: int = 1, prune: bool = True):
    """Lexicographically first Mukai pair in the box ``[-n, n]^3``, or ``None``.

    Isotropic vectors are enumerated once; those whose Gram row has gcd > 1 are
    dropped, since ``chi(-, v2)`` then never equals 1.  The remaining work is split
    by the leading coordinate of ``v1`` across ``workers`` processes.
    ``prune=False`` skips the gcd filter and tests every isotropic vector.
    """
    if n < 1:
        return None
    nulls, rows = _useful_nulls(lattice, n, prune)
    if not len(nulls):
        return None
    leads = list(range(-n, n + 1))
    jobs = ((n, lead, rows, True) for lead in leads)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_hits_for_lead, jobs))
    else:
        results = []
        for job in jobs:
            results.append(_hits_for_lead(job))
            if results[-1]:
                break
    for lead, hits in zip(leads, results):
        if hits:
            i, j = hits[0]
            return tuple(int(c) for c in _box(n, lead)[i]), tuple(int(c) for c in nulls[j])
    return None


def pair_search_naive(lattice: EulerLattice, n: int):
    """Plain double loop over the box; reference for :func:`pair_search` on small boxes."""
    rng = range(-n, n + 1)
    vecs = list(itertools.product(rng, repeat=3))
    nulls = [v for v in vecs if lattice.chi(v, v) == 0]
    for v1 in vecs:
        for v2 in nulls:
            if lattice.chi(v1, v2) == 1:
                return v1, v2
    return None


class CounterexampleFound(AssertionError):
    """An isotropic vector with odd ``h``-coordinate in a lattice where none may exist."""


@dataclass(frozen=True)
class ParityReport:
    box: int
    null_vector_count: int
    odd_y_count: int
    congruence_ok: bool

    @property
    def ok(self) -> bool:
        return self.odd_y_count == 0 and self.congruence_ok

    def to_json(self) -> dict:
        return {
            "box": self.box,
            "null_vector_count": self.null_vector_count,
            "odd_y_count": self.odd_y_count,
            "congruence_ok": self.congruence_ok,
        }


def parity_certificate(lattice: EulerLattice, n: int) -> ParityReport:
    """Check every isotropic vector in the box has even ``y`` and ``y^2 = x(x+y) mod 2``."""
    if lattice.tag != "twisted" or lattice.b is None:
        raise ValueError("parity certificate needs a twisted lattice")
    if frac(lattice.b.bh) != HALF or frac(lattice.b.bsq) != HALF:
        raise ValueError("parity certificate needs {Bh} = {B^2} = 1/2")
    nulls = null_vectors(lattice, n)
    x, y = nulls[:, 0], nulls[:, 1]
    odd = nulls[y % 2 != 0]
    congruence = bool(np.all((y * y - x * (x + y)) % 2 == 0))
    if len(odd):
        raise CounterexampleFound(f"isotropic vector with odd h-coordinate: {tuple(int(c) for c in odd[0])}")
    return ParityReport(n, int(len(nulls)), 0, congruence)


def search_report(lattice: EulerLattice, n: int, workers: int = 1) -> dict:
    """JSON-ready summary of a bounded search and, for twisted lattices, the parity check."""
    pair = pair_search(lattice, n, workers)
    out = {
        "lattice": lattice.to_json(),
        "box": n,
        "found": pair is not None,
        "null_vector_count": int(len(null_vectors(lattice, n))),
    }
    if pair is not None:
        out["pair"] = [list(pair[0]), list(pair[1])]
    if lattice.tag == "twisted" and lattice.b is not None and frac(lattice.b.bh) == HALF == frac(lattice.b.bsq):
        out["parity_ok"] = parity_certificate(lattice, n).ok
    else:
        out["parity_ok"] = None
    return out


# --------------------------------------------------------------------------
# invariants of the B-field


def b_invariance(b: BData, u_h: int = 0, u_sq: int = 0, mode: str = "integral", two_bu: int = 0):
    """Fractional parts of ``Bh`` and ``B^2`` after changing the lift.

    ``integral``: ``B -> B + u`` with ``u.h = u_h``, ``u^2 = u_sq`` and ``2B.u = two_bu``.
    ``half_h``: ``B -> B + h/2`` on a surface with ``h^2 = 2``.
    """
    if mode == "integral":
        bh = b.bh + int(u_h)
        bsq = b.bsq + int(two_bu) + int(u_sq)
    elif mode == "half_h":
        bh = b.bh + 1
        bsq = b.bsq + b.bh + HALF
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return frac(bh), frac(bsq)


def b0_summands(rank: int = 3) -> tuple[int, ...]:
    """Twists of ``sum_k Lambda^k A (x) O(-k)`` for a trivial bundle ``A`` of the given rank."""
    out = []
    for k in range(rank + 1):
        out.extend(-k + s for s in exterior_power((0,) * rank, k))
    return tuple(sorted(out, reverse=True))


def chi_P2(t: int) -> int:
    return (t + 1) * (t + 2) // 2


def chi_B0() -> int:
    """Euler characteristic of the even Clifford algebra on the plane: ``O + 3 O(-1) + 3 O(-2) + O(-3)``."""
    return sum(chi_P2(t) for t in b0_summands())


def chi_B0_bott() -> int:
    """The same number through the cohomology oracle."""
    return coh_split(SplitBundle(ProjectiveSpace(2), b0_summands())).euler


def hecke_parity(start_deg: int, flips: int) -> int:
    """Parity of ``deg det`` after ``flips`` simple Hecke transformations."""
    if flips < 0:
        raise ValueError("number of flips must be nonnegative")
    return (int(start_deg) + int(flips)) % 2


@dataclass(frozen=True)
class CycleClass:
    """``a * P + b * H^2`` for the plane ``P`` and the square of the hyperplane class."""

    a: int
    b: int


# Intersection numbers on (P, H^2): P.P = 3, P.H^2 = 1, H^2.H^2 = 3.
_CYCLE_FORM = ((3, 1), (1, 3))


def cycle_product(s: CycleClass, t: CycleClass) -> int:
    u, v = (s.a, s.b), (t.a, t.b)
    return sum(u[i] * _CYCLE_FORM[i][j] * v[j] for i in range(2) for j in range(2))


def delta_parity(t: CycleClass) -> int:
    """``delta(T) = T.H^2 - T.P``, equal to ``-2a + 2b`` for ``T = a P + b H^2``."""
    return cycle_product(t, CycleClass(0, 1)) - cycle_product(t, CycleClass(1, 0))
