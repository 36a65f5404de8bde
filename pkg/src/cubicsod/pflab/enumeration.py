"""Point enumeration over finite fields: projective spaces, ``Gr(2, 6)`` and zero loci.

Projective points are normalised so that the first nonzero coordinate is 1;
2-planes are stored as reduced row-echelon ``2 x 6`` matrices.  Enumerations run
in numpy chunks and refuse to start when the number of candidates exceeds
``bound``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .fields import FiniteField
from .forms import HomogeneousForm

__all__ = [
    "EnumerationBound",
    "DEFAULT_BOUND",
    "projective_count",
    "grassmannian_count",
    "projective_points",
    "grassmannian_points",
    "batched_rref",
    "singular_points",
    "s_points",
    "SmoothnessReport",
    "xv_points",
    "xv_candidate_count",
]

DEFAULT_BOUND = 100_000_000


class EnumerationBound(ValueError):
    """The requested enumeration is larger than the configured bound."""


def projective_count(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def grassmannian_count(k: int, n: int, q: int) -> int:
    """Gaussian binomial ``[n choose k]_q``."""
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _check_bound(count: int, bound: int, what: str):
    if count > bound:
        raise EnumerationBound(f"{what}: {count} candidates exceed the bound {bound}")


def _affine(field: FiniteField, dim: int, chunk: int) -> Iterator[np.ndarray]:
    """All vectors of ``F^dim`` in lexicographic order, in chunks."""
    q = field.size
    total = q**dim
    weights = q ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield (idx[:, None] // weights[None, :]) % q


def projective_points(n: int, field: FiniteField, chunk: int = 1 << 16, bound: int = DEFAULT_BOUND) -> Iterator[np.ndarray]:
    """Chunks of points of ``P^n``, each row with its first nonzero coordinate equal to 1."""
    _check_bound(projective_count(n, field.size), bound, f"P^{n}({field.spec})")
    for lead in range(n + 1):
        tail = n - lead
        if tail == 0:
            pt = np.zeros((1, n + 1), dtype=np.int64)
            pt[0, lead] = 1
            yield pt
            continue
        for block in _affine(field, tail, chunk):
            pts = np.zeros((len(block), n + 1), dtype=np.int64)
            pts[:, lead] = 1
            pts[:, lead + 1 :] = block
            yield pts


def grassmannian_points(field: FiniteField, n: int = 6, chunk: int = 1 << 16, bound: int = DEFAULT_BOUND) -> Iterator[np.ndarray]:
    """Chunks of 2-planes in ``F^n`` as reduced row-echelon matrices, shape ``(m, 2, n)``."""
    _check_bound(grassmannian_count(2, n, field.size), bound, f"Gr(2,{n})({field.spec})")
    for p1, p2 in itertools.combinations(range(n), 2):
        free1 = [j for j in range(p1 + 1, n) if j != p2]
        free2 = list(range(p2 + 1, n))
        dim = len(free1) + len(free2)
        blocks = _affine(field, dim, chunk) if dim else iter([np.zeros((1, 0), dtype=np.int64)])
        for block in blocks:
            mats = np.zeros((len(block), 2, n), dtype=np.int64)
            mats[:, 0, p1] = 1
            mats[:, 1, p2] = 1
            if free1:
                mats[:, 0, free1] = block[:, : len(free1)]
            if free2:
                mats[:, 1, free2] = block[:, len(free1) :]
            yield mats


def batched_rref(mats: np.ndarray, field: FiniteField):
    """Reduced row-echelon forms of a batch of matrices ``(B, r, c)``.

    Returns ``(rref, pivot_cols, rank)`` where ``pivot_cols`` is a boolean ``(B, c)``
    array marking pivot columns.
    """
    m = np.array(mats, dtype=np.int64, copy=True)
    bsz, rows, cols = m.shape
    rank = np.zeros(bsz, dtype=np.int64)
    pivots = np.zeros((bsz, cols), dtype=bool)
    ar = np.arange(bsz)
    for c in range(cols):
        rowidx = np.arange(rows)[None, :]
        cand = (m[:, :, c] != 0) & (rowidx >= rank[:, None])
        has = cand.any(axis=1) & (rank < rows)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        b = ar[has]
        r = rank[has]
        p = piv[has]
        top = m[b, r, :].copy()
        m[b, r, :] = m[b, p, :]
        m[b, p, :] = top
        inv = field.inv_t[m[b, r, c]]
        m[b, r, :] = field.mul_t[inv[:, None], m[b, r, :]]
        pivrow = m[b, r, :]
        for i in range(rows):
            sel = r != i
            if not sel.any():
                continue
            bi = b[sel]
            f = m[bi, i, c]
            nz = f != 0
            if not nz.any():
                continue
            bi = bi[nz]
            f = f[nz]
            prow = pivrow[sel][nz]
            m[bi, i, :] = field.add_t[m[bi, i, :], field.neg_t[field.mul_t[f[:, None], prow]]]
        pivots[b, c] = True
        rank[b] += 1
    return m, pivots, rank


def singular_points(F: HomogeneousForm, field: Optional[FiniteField] = None, bound: int = DEFAULT_BOUND) -> list[tuple[int, ...]]:
    """Points of ``P^{n-1}`` where ``F`` and all its partial derivatives vanish."""
    field = field or F.field
    if field != F.field:
        raise ValueError("form and field disagree")
    grads = F.gradient()
    out = []
    for pts in projective_points(F.nvars - 1, field, bound=bound):
        mask = F.evaluate_many(pts) == 0
        for g in grads:
            if not mask.any():
                break
            mask &= g.evaluate_many(pts) == 0
        out.extend(tuple(int(c) for c in p) for p in pts[mask])
    return sorted(out)


@dataclass
class SmoothnessReport:
    """Rank of the Jacobian at every enumerated point of a complete intersection.

    Only rational points over the enumerated field are examined; nothing is
    claimed about points over larger extensions.
    """

    field: str
    point_count: int
    singular: list = field(default_factory=list)

    @property
    def smooth_at_rational_points(self) -> bool:
        return not self.singular

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "point_count": self.point_count,
            "singular_rational_points": [list(p) for p in self.singular],
            "scope": "rational points over the enumerated field only",
        }


def s_points(F2: HomogeneousForm, F3: HomogeneousForm, field: Optional[FiniteField] = None, bound: int = DEFAULT_BOUND, report: bool = False):
    """Points of ``{F2 = F3 = 0}`` in ``P^4``; with ``report`` also a Jacobian rank check."""
    field = field or F2.field
    if F2.field != field or F3.field != field:
        raise ValueError("forms and field disagree")
    if F2.nvars != F3.nvars:
        raise ValueError("forms in different numbers of variables")
    pts_all = []
    singular = []
    grads = (F2.gradient(), F3.gradient())
    for pts in projective_points(F2.nvars - 1, field, bound=bound):
        mask = (F2.evaluate_many(pts) == 0) & (F3.evaluate_many(pts) == 0)
        good = pts[mask]
        if not len(good):
            continue
        pts_all.extend(tuple(int(c) for c in p) for p in good)
        if report:
            jac = np.stack([np.stack([g.evaluate_many(good) for g in gs], axis=1) for gs in grads], axis=1)
            _, _, rk = batched_rref(jac, field)
            singular.extend(tuple(int(c) for c in p) for p in good[rk < 2])
    pts_all.sort()
    if report:
        return pts_all, SmoothnessReport(str(field.spec), len(pts_all), sorted(singular))
    return pts_all


def xv_candidate_count(field: FiniteField, n: int = 6) -> int:
    """Number of first rows the Schubert-cell search in :func:`xv_points` visits."""
    q = field.size
    return sum(q ** (n - p1 - 2) for p1 in range(n) for p2 in range(p1 + 1, n))


def xv_points(basis, field: Optional[FiniteField] = None, bound: int = DEFAULT_BOUND, chunk: int = 1 << 15, workers: int = 1) -> list[np.ndarray]:
    """2-planes ``U`` in ``F^6`` on which every form of ``basis`` vanishes.

    For each Schubert cell (pivot columns ``p1 < p2``) and each admissible first
    row ``u``, the conditions ``w_i(u, v) = 0`` are linear in the second row ``v``;
    they are solved for a whole batch of ``u`` at once.  The planes come back as
    reduced row-echelon matrices in canonical sorted order.
    """
    basis = list(basis)
    field = field or basis[0].field
    n = basis[0].n
    _check_bound(xv_candidate_count(field, n), bound, f"X_V over {field.spec}")
    W = np.array([[list(r) for r in b.entries] for b in basis], dtype=np.int64)  # (k, n, n)
    tasks = []
    for p1, p2 in itertools.combinations(range(n), 2):
        total = field.size ** (n - p1 - 2)
        tasks.extend((p1, p2, a, min(a + chunk, total)) for a in range(0, total, chunk))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        spec = field.spec
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_xv_task_spec, [(spec, W, t) for t in tasks]))
    else:
        parts = [_xv_task(field, W, t) for t in tasks]
    out = [m for part in parts for m in part]
    out.sort(key=lambda m: tuple(m.ravel()))
    return out


def _xv_task_spec(args):
    from .fields import make_field

    spec, W, task = args
    return _xv_task(make_field(spec), W, task)


def _xv_task(field: FiniteField, W: np.ndarray, task) -> list[np.ndarray]:
    p1, p2, a, b = task
    n = W.shape[1]
    free1 = [j for j in range(p1 + 1, n) if j != p2]
    free2 = list(range(p2 + 1, n))
    q = field.size
    idx = np.arange(a, b, dtype=np.int64)
    weights = q ** np.arange(len(free1) - 1, -1, -1, dtype=np.int64)
    u = np.zeros((len(idx), n), dtype=np.int64)
    u[:, p1] = 1
    if free1:
        u[:, free1] = (idx[:, None] // weights[None, :]) % q
    # rows w_i^T u, so that w_i(u, v) = row_i . v
    rows = _forms_times(field, W, u)  # (B, k, n)
    # v = e_{p2} + sum_{j in free2} c_j e_j; solve A c = -rows[:, :, p2]
    A = rows[:, :, free2]
    rhs = field.neg_t[rows[:, :, p2]]
    red, piv, _ = batched_rref(np.concatenate([A, rhs[:, :, None]], axis=2), field)
    out = []
    for k in np.nonzero(~piv[:, -1])[0]:
        for c in _solutions(field, red[k], piv[k], len(free2)):
            v = np.zeros(n, dtype=np.int64)
            v[p2] = 1
            v[free2] = c
            out.append(np.stack([u[k], v]))
    return out


def _forms_times(field: FiniteField, W: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``out[b, i, j] = sum_s u[b, s] * W[i, s, j]`` over the field."""
    bsz, n = u.shape
    k = W.shape[0]
    out = np.zeros((bsz, k, n), dtype=np.int64)
    for s in range(n):
        us = u[:, s]
        if not us.any():
            continue
        out = field.add_t[out, field.mul_t[us[:, None, None], W[None, :, s, :]]]
    return out


def _solutions(field: FiniteField, red: np.ndarray, piv: np.ndarray, m: int):
    """All solutions of a consistent system in reduced row-echelon form with ``m`` unknowns."""
    pivcols = [c for c in range(m) if piv[c]]
    free = [c for c in range(m) if not piv[c]]
    for vals in itertools.product(range(field.size), repeat=len(free)):
        x = np.zeros(m, dtype=np.int64)
        for c, val in zip(free, vals):
            x[c] = val
        for r, c in enumerate(pivcols):
            acc = red[r, m]
            for f in free:
                acc = field.sub(acc, field.mul(int(red[r, f]), int(x[f])))
            x[c] = acc
        yield x
