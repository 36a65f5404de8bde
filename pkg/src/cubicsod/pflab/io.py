"""JSON documents for pflab inputs: skew bases and forms, each with a field descriptor."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .fields import FieldSpec, make_field
from .forms import HomogeneousForm, SkewForm, random_form, random_skew

__all__ = ["generate_instance", "load_instance", "basis_to_json", "basis_from_json", "load_form"]


def basis_to_json(basis) -> dict:
    return {"field": basis[0].field.spec.to_json(), "forms": [b.to_json() for b in basis]}


def basis_from_json(data) -> list[SkewForm]:
    field = make_field(FieldSpec(**data["field"]))
    return [SkewForm.from_json(field, rows) for rows in data["forms"]]


def generate_instance(q: int = 7, seed: int = 0, k: int = 1) -> dict:
    """A seeded random skew basis plus a random quadric and cubic in five variables."""
    field = make_field(q, k)
    rng = np.random.default_rng(seed)
    basis = [random_skew(field, rng) for _ in range(6)]
    F2 = random_form(field, 5, 2, rng)
    F3 = random_form(field, 5, 3, rng)
    return {
        "seed": seed,
        "field": field.spec.to_json(),
        "basis": basis_to_json(basis),
        "F2": F2.to_json(),
        "F3": F3.to_json(),
    }


def _read(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    text = str(source)
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return json.loads(Path(source).read_text())


def load_instance(source) -> dict:
    """Decode a document produced by :func:`generate_instance`."""
    data = _read(source)
    return {
        "seed": data.get("seed"),
        "basis": basis_from_json(data["basis"]),
        "F2": HomogeneousForm.from_json(data["F2"]),
        "F3": HomogeneousForm.from_json(data["F3"]),
    }


def load_form(source) -> HomogeneousForm:
    """A single form, or the singular model ``z0 F2 + F3`` of an instance document."""
    from .forms import singular_cubic_model

    data = _read(source)
    if "coeffs" in data:
        return HomogeneousForm.from_json(data)
    inst = load_instance(data)
    return singular_cubic_model(inst["F2"], inst["F3"])
