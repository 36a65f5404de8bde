"""Two-field point counts used as dimension evidence for zero loci."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fields import make_field
from .enumeration import DEFAULT_BOUND, s_points, xv_points

__all__ = ["TwoFieldCount", "xv_count_report", "s_count_report"]


@dataclass
class TwoFieldCount:
    """Point counts over ``F_q`` and ``F_{q^k}``.

    ``dimension_estimate`` is ``log(N_k / N_1) / log(q^(k-1))``, which tends to the
    dimension of the locus; it is evidence, never a verdict.
    """

    what: str
    q: int
    counts: dict

    @property
    def dimension_estimate(self):
        ks = sorted(self.counts)
        if len(ks) < 2 or not self.counts[ks[0]] or not self.counts[ks[-1]]:
            return None
        ratio = self.counts[ks[-1]] / self.counts[ks[0]]
        return math.log(ratio) / math.log(self.q ** (ks[-1] - ks[0]))

    def to_json(self) -> dict:
        est = self.dimension_estimate
        return {
            "locus": self.what,
            "q": self.q,
            "counts": {f"F_{self.q}^{k}": c for k, c in sorted(self.counts.items())},
            "ratio": (self.counts[max(self.counts)] / self.counts[min(self.counts)]) if len(self.counts) > 1 and self.counts[min(self.counts)] else None,
            "dimension_estimate": None if est is None else round(est, 4),
            "scope": "point-count evidence only",
        }


def xv_count_report(basis, ext: int = 1, bound: int = DEFAULT_BOUND, workers: int = 1) -> TwoFieldCount:
    """Counts of ``X_V`` over ``F_q`` and, for ``ext = 2``, over ``F_{q^2}``."""
    base = basis[0].field
    counts = {}
    for k in range(1, ext + 1):
        field = make_field(base.p, k)
        counts[k] = len(xv_points([b.extend(field) for b in basis], field, bound=bound, workers=workers))
    return TwoFieldCount("X_V", base.p, counts)


def s_count_report(F2, F3, ext: int = 1, bound: int = DEFAULT_BOUND) -> TwoFieldCount:
    """Counts of ``{F2 = F3 = 0}`` in ``P^4`` over ``F_q`` and its extensions up to degree ``ext``."""
    base = F2.field
    counts = {}
    for k in range(1, ext + 1):
        field = make_field(base.p, k)
        counts[k] = len(s_points(F2.extend(field), F3.extend(field), field, bound=bound))
    return TwoFieldCount("S", base.p, counts)
