"""Skew forms, Pfaffians and homogeneous polynomials over an exact field."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fields import Field, FieldSpec, RationalField, make_field

__all__ = [
    "SkewForm",
    "HomogeneousForm",
    "CubicForm",
    "DependentBasis",
    "DegenerateSpan",
    "NotSkew",
    "pfaffian",
    "determinant",
    "rank",
    "matmul",
    "transpose",
    "pfaffian_cubic",
    "pfaffian_polynomial",
    "skew_from_upper",
    "upper_entries",
    "monomials",
    "random_skew",
    "random_form",
    "wedge",
    "interpolate",
    "singular_cubic_model",
]


class NotSkew(ValueError):
    """A matrix that is not skew-symmetric with zero diagonal."""


class DependentBasis(ValueError):
    """The six skew forms are linearly dependent."""


class DegenerateSpan(ValueError):
    """Every form in the span is degenerate: the Pfaffian cubic vanishes identically."""


# --------------------------------------------------------------------------
# generic linear algebra on lists of lists


def matmul(field: Field, a, b):
    n, m, p = len(a), len(b), len(b[0])
    out = [[field.zero] * p for _ in range(n)]
    for i in range(n):
        for j in range(p):
            acc = field.zero
            for t in range(m):
                acc = field.add(acc, field.mul(a[i][t], b[t][j]))
            out[i][j] = acc
    return out


def transpose(a):
    return [list(r) for r in zip(*a)]


def _echelon(field: Field, a):
    """Row echelon form by Gaussian elimination; returns (matrix, rank, sign of row swaps)."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r, sign = 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not field.is_zero(m[i][c])), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        inv = field.inv(m[r][c])
        for i in range(r + 1, rows):
            if not field.is_zero(m[i][c]):
                f = field.mul(m[i][c], inv)
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return m, r, sign


def determinant(field: Field, a):
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    m, r, sign = _echelon(field, a)
    if r < n:
        return field.zero
    out = field.one if sign > 0 else field.neg(field.one)
    for i in range(n):
        out = field.mul(out, m[i][i])
    return out


def rank(field: Field, a) -> int:
    if not a:
        return 0
    return _echelon(field, a)[1]


# --------------------------------------------------------------------------
# Pfaffians


class _PolyRing:
    """Polynomials as ``{exponent tuple: coefficient}`` dicts over a field."""

    def __init__(self, field: Field, nvars: int):
        self.field, self.n = field, nvars
        self.zero = {}

    def add(self, a, b):
        out = dict(a)
        for m, c in b.items():
            v = self.field.add(out.get(m, self.field.zero), c)
            if self.field.is_zero(v):
                out.pop(m, None)
            else:
                out[m] = v
        return out

    def neg(self, a):
        return {m: self.field.neg(c) for m, c in a.items()}

    def mul(self, a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = self.field.add(out.get(m, self.field.zero), self.field.mul(c1, c2))
                if self.field.is_zero(v):
                    out.pop(m, None)
                else:
                    out[m] = v
        return out

    def is_zero(self, a) -> bool:
        return not a


def _pf(ring, a, idx):
    """Pfaffian of the principal submatrix on ``idx`` by expansion along the first index."""
    if len(idx) == 2:
        return a[idx[0]][idx[1]]
    first, rest = idx[0], idx[1:]
    total = ring.zero
    for pos, j in enumerate(rest):
        entry = a[first][j]
        if ring.is_zero(entry):
            continue
        sub = _pf(ring, a, rest[:pos] + rest[pos + 1 :])
        term = ring.mul(entry, sub)
        total = ring.add(total, term if pos % 2 == 0 else ring.neg(term))
    return total


def _check_skew(field: Field, m):
    n = len(m)
    if any(len(r) != n for r in m):
        raise NotSkew("matrix is not square")
    for i in range(n):
        if not field.is_zero(m[i][i]):
            raise NotSkew(f"nonzero diagonal entry at {i}")
        for j in range(i + 1, n):
            if not field.is_zero(field.add(m[i][j], m[j][i])):
                raise NotSkew(f"entries ({i},{j}) and ({j},{i}) are not opposite")


def pfaffian(field: Field, m):
    """Pfaffian by perfect-matching expansion (15 terms for a 6x6 matrix)."""
    if isinstance(m, SkewForm):
        field, m = m.field, m.entries
    m = [list(r) for r in m]
    _check_skew(field, m)
    n = len(m)
    if n % 2:
        return field.zero
    if n == 0:
        return field.one
    return _pf(field, m, tuple(range(n)))


@dataclass(frozen=True)
class SkewForm:
    """A skew-symmetric matrix over a field, stored as a tuple of rows."""

    entries: tuple
    field: Field

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        _check_skew(self.field, rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def rows(self):
        return [list(r) for r in self.entries]

    def __call__(self, u, v):
        """``u^T M v``."""
        f = self.field
        acc = f.zero
        for i in range(self.n):
            if f.is_zero(u[i]):
                continue
            for j in range(self.n):
                acc = f.add(acc, f.mul(u[i], f.mul(self.entries[i][j], v[j])))
        return acc

    def pfaffian(self):
        return pfaffian(self.field, self.entries)

    def to_json(self):
        return [[self.field.fmt(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, field: Field, rows) -> "SkewForm":
        return cls(tuple(tuple(field.parse(x) for x in r) for r in rows), field)

    def extend(self, field: Field) -> "SkewForm":
        """The same form over an extension field of the same characteristic."""
        return SkewForm(self.entries, _check_extension(self.field, field))


def skew_from_upper(field: Field, upper, n: int = 6) -> SkewForm:
    """Skew form from its entries above the diagonal, row by row."""
    upper = list(upper)
    if len(upper) != n * (n - 1) // 2:
        raise ValueError("wrong number of upper-triangular entries")
    m = [[field.zero] * n for _ in range(n)]
    it = iter(upper)
    for i in range(n):
        for j in range(i + 1, n):
            x = next(it)
            m[i][j] = x
            m[j][i] = field.neg(x)
    return SkewForm(tuple(tuple(r) for r in m), field)


def upper_entries(form: SkewForm) -> list:
    return [form.entries[i][j] for i in range(form.n) for j in range(i + 1, form.n)]


def wedge(field: Field, u, v) -> SkewForm:
    """The rank-2 form ``u v^T - v u^T``."""
    n = len(u)
    m = [[field.sub(field.mul(u[i], v[j]), field.mul(v[i], u[j])) for j in range(n)] for i in range(n)]
    return SkewForm(tuple(tuple(r) for r in m), field)


def random_skew(field: Field, rng: np.random.Generator, n: int = 6, bound: int = 9) -> SkewForm:
    if isinstance(field, RationalField):
        upper = [field.random(rng, bound=bound) for _ in range(n * (n - 1) // 2)]
    else:
        upper = [field.random(rng) for _ in range(n * (n - 1) // 2)]
    return skew_from_upper(field, upper, n)


# --------------------------------------------------------------------------
# homogeneous forms


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given degree, in descending lexicographic order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


_MONO = re.compile(r"z(\d+)(?:\^(\d+))?")


def _mono_str(e) -> str:
    parts = [f"z{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
    return "*".join(parts) if parts else "1"


def _mono_parse(text: str, nvars: int) -> tuple[int, ...]:
    e = [0] * nvars
    if text.strip() == "1":
        return tuple(e)
    for part in text.split("*"):
        m = _MONO.fullmatch(part.strip())
        if not m:
            raise ValueError(f"bad monomial {text!r}")
        i = int(m.group(1))
        if i >= nvars:
            raise ValueError(f"variable z{i} out of range in {text!r}")
        e[i] += int(m.group(2) or 1)
    return tuple(e)


def _check_extension(base: Field, ext: Field) -> Field:
    # prime-field elements are the integers 0 .. p-1 in every extension
    if base == ext:
        return ext
    if base.spec.q == 0 or base.spec.k != 1 or ext.spec.q != base.spec.q:
        raise ValueError(f"{ext.spec} is not an extension of {base.spec}")
    return ext


class HomogeneousForm:
    """A homogeneous polynomial ``{exponent tuple: coefficient}`` in ``nvars`` variables."""

    def __init__(self, field: Field, nvars: int, degree: int, coeffs: Optional[dict] = None):
        self.field, self.nvars, self.degree = field, nvars, degree
        clean = {}
        for m, c in (coeffs or {}).items():
            m = tuple(int(x) for x in m)
            if len(m) != nvars or sum(m) != degree or min(m) < 0:
                raise ValueError(f"monomial {m} is not of degree {degree} in {nvars} variables")
            if not field.is_zero(c):
                clean[m] = c
        self.coeffs = clean

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousForm)
            and (self.field, self.nvars, self.degree) == (other.field, other.nvars, other.degree)
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"{type(self).__name__}({self.field.spec}, {self.nvars} vars, {len(self.coeffs)} terms)"

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, point):
        f = self.field
        acc = f.zero
        for m, c in self.coeffs.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term = f.mul(term, f.pow(x, e))
            acc = f.add(acc, term)
        return acc

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Values at the rows of an integer array of points (finite fields only)."""
        f = self.field
        points = np.asarray(points, dtype=np.int64)
        powers = {}
        out = np.zeros(len(points), dtype=np.int64)
        for m, c in self.coeffs.items():
            term = np.full(len(points), c, dtype=np.int64)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = f.pow(points[:, i], e)
                    term = f.mul_t[term, powers[key]]
            out = f.add_t[out, term]
        return out

    def extend(self, field: Field) -> "HomogeneousForm":
        """The same form over an extension field of the same characteristic."""
        return type(self)(_check_extension(self.field, field), self.nvars, self.degree, self.coeffs)

    def partial(self, i: int) -> "HomogeneousForm":
        f = self.field
        out = {}
        for m, c in self.coeffs.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = f.mul(f.elem(m[i]), c)
        return HomogeneousForm(f, self.nvars, self.degree - 1, out)

    def gradient(self) -> list["HomogeneousForm"]:
        return [self.partial(i) for i in range(self.nvars)]

    def to_json(self) -> dict:
        return {
            "field": self.field.spec.to_json(),
            "nvars": self.nvars,
            "degree": self.degree,
            "coeffs": {_mono_str(m): self.field.fmt(c) for m, c in sorted(self.coeffs.items(), reverse=True)},
        }

    @classmethod
    def from_json(cls, data) -> "HomogeneousForm":
        if isinstance(data, str):
            data = json.loads(data)
        field = make_field(FieldSpec(**data["field"]))
        nvars, degree = int(data["nvars"]), int(data["degree"])
        coeffs = {_mono_parse(k, nvars): field.parse(v) for k, v in data["coeffs"].items()}
        target = CubicForm if degree == 3 and cls is not HomogeneousForm else cls
        return target(field, nvars, degree, coeffs)


class CubicForm(HomogeneousForm):
    """A nonzero homogeneous cubic."""

    def __init__(self, field: Field, nvars: int = 6, degree: int = 3, coeffs: Optional[dict] = None):
        if degree != 3:
            raise ValueError("a cubic form has degree 3")
        super().__init__(field, nvars, 3, coeffs)
        if not self.coeffs:
            raise ValueError("the zero polynomial is not a cubic form")


def random_form(field: Field, nvars: int, degree: int, rng: np.random.Generator) -> HomogeneousForm:
    coeffs = {m: field.random(rng) for m in monomials(nvars, degree)}
    return HomogeneousForm(field, nvars, degree, coeffs)


def _linear(ring: _PolyRing, coeffs) -> dict:
    out = {}
    for i, c in enumerate(coeffs):
        if not ring.field.is_zero(c):
            e = [0] * ring.n
            e[i] = 1
            out[tuple(e)] = c
    return out


def pfaffian_cubic(basis) -> CubicForm:
    """``Pf(x_1 w_1 + ... + x_6 w_6)`` for six independent skew forms on a 6-space."""
    basis = list(basis)
    if len(basis) != 6 or any(b.n != 6 for b in basis):
        raise ValueError("need six 6x6 skew forms")
    field = basis[0].field
    if rank(field, [upper_entries(b) for b in basis]) < 6:
        raise DependentBasis("the six forms are linearly dependent")
    ring = _PolyRing(field, 6)
    entries = [[_linear(ring, [b.entries[i][j] for b in basis]) for j in range(6)] for i in range(6)]
    poly = _pf(ring, entries, tuple(range(6)))
    if not poly:
        raise DegenerateSpan("the span consists of degenerate forms")
    return CubicForm(field, 6, 3, poly)


def pfaffian_polynomial(field: Field) -> CubicForm:
    """Pfaffian of the generic 6x6 skew matrix, a cubic in its 15 upper entries."""
    ring = _PolyRing(field, 15)
    m = [[ring.zero] * 6 for _ in range(6)]
    k = 0
    for i in range(6):
        for j in range(i + 1, 6):
            e = [0] * 15
            e[k] = 1
            m[i][j] = {tuple(e): field.one}
            m[j][i] = {tuple(e): field.neg(field.one)}
            k += 1
    return CubicForm(field, 15, 3, _pf(ring, m, tuple(range(6))))


def interpolate(field: Field, nvars: int, degree: int, points, values) -> HomogeneousForm:
    """The form of the given degree taking ``values`` at ``points`` (needs a unisolvent point set)."""
    monos = monomials(nvars, degree)
    if len(points) != len(monos):
        raise ValueError(f"need exactly {len(monos)} points")
    rows = []
    for pt, val in zip(points, values):
        row = []
        for m in monos:
            t = field.one
            for x, e in zip(pt, m):
                if e:
                    t = field.mul(t, field.pow(x, e))
            row.append(t)
        rows.append(row + [val])
    if rank(field, [r[:-1] for r in rows]) < len(monos):
        raise ValueError("points do not determine a form of this degree")
    sol = _solve(field, rows, len(monos))
    return HomogeneousForm(field, nvars, degree, dict(zip(monos, sol)))


def _solve(field: Field, aug, n):
    """Solve a square nonsingular system given as augmented rows."""
    m = [list(r) for r in aug]
    for c in range(n):
        piv = next(i for i in range(c, n) if not field.is_zero(m[i][c]))
        m[c], m[piv] = m[piv], m[c]
        inv = field.inv(m[c][c])
        m[c] = [field.mul(inv, x) for x in m[c]]
        for i in range(n):
            if i != c and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def singular_cubic_model(F2: HomogeneousForm, F3: HomogeneousForm) -> CubicForm:
    """The cubic ``z0 * F2(z1..z5) + F3(z1..z5)`` in six variables."""
    if F2.degree != 2 or F3.degree != 3:
        raise ValueError("need a quadric and a cubic")
    if F2.nvars != 5 or F3.nvars != 5:
        raise ValueError("F2 and F3 are forms in five variables")
    if F2.field != F3.field:
        raise ValueError("forms over different fields")
    coeffs = {(1,) + m: c for m, c in F2.coeffs.items()}
    for m, c in F3.coeffs.items():
        coeffs[(0,) + m] = c
    return CubicForm(F2.field, 6, 3, coeffs)
