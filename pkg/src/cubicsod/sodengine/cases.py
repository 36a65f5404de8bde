"""The two built-in geometries and their replay scripts."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from ..cohomology import plane_blowup, singular_blowup
from .geometry import Geometry, Subvariety

__all__ = ["plane_geometry", "singular_geometry", "get_geometry", "builtin_script", "CASES"]

CASES = ("plane", "singular")


@lru_cache(maxsize=None)
def plane_geometry() -> Geometry:
    """Blowup of a cubic fourfold along a plane; ``D = H - h`` is the exceptional divisor."""
    identity = ((1, 0), (0, 1))
    return Geometry(
        "plane",
        plane_blowup(),
        (Subvariety("D", "i", (1, -1), identity),),
        polarization=(1, 0),
    )


@lru_cache(maxsize=None)
def singular_geometry() -> Geometry:
    """Blowup of a nodal cubic fourfold at the node, basis ``(h, D)``.

    ``Q = 2h - D`` is the exceptional quadric.  ``H`` restricts trivially to it,
    so ``D`` restricts as ``3h`` and a class ``a*h + b*D`` on ``Q`` is recorded as
    ``(a + 3b)*h``.
    """
    return Geometry(
        "singular",
        singular_blowup(),
        (
            Subvariety("Q", "alpha", (2, -1), ((1, 3), (0, 0))),
            Subvariety("D", "i", (0, 1), ((1, 0), (0, 1))),
        ),
        polarization=(3, -1),
    )


def get_geometry(name: str) -> Geometry:
    if name == "plane":
        return plane_geometry()
    if name == "singular":
        return singular_geometry()
    raise KeyError(f"unknown case {name!r} (known: {', '.join(CASES)})")


def builtin_script(name: str) -> dict:
    """The shipped replay script for ``name`` as a plain dict."""
    if name not in CASES:
        raise KeyError(f"unknown case {name!r} (known: {', '.join(CASES)})")
    text = resources.files(__package__).joinpath("data", f"{name}.json").read_text()
    return json.loads(text)
