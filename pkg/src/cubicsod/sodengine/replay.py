"""Scripted replays of mutation sequences, with traces and a final verdict.

A script is a JSON document::

    {"case": "plane" | "singular",
     "start": [component, ...], "target": [component, ...],
     "reference": [component, ...],            # optional
     "facts": [fact, ...],                      # optional, taken on trust
     "steps": [{"op": ..., "args": {...}, "group": ..., "label": ...}, ...]}

Operations: ``mutate_left`` / ``mutate_right`` (``k``), ``transpose`` (``i``, ``j``),
``serre_rotate`` (``positions``, optional ``direction``), ``twist`` (``by``),
``collapse`` (``k``).  Steps sharing a ``group`` stand for one simultaneous step
in the source argument; the replay checks that they really are independent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .engine import (
    SOD,
    Collapse,
    FactBase,
    collapse,
    mutate_left,
    mutate_right,
    serre_rotate,
    shadow_additivity,
    transpose,
    twist_sod,
)
from .geometry import Geometry

__all__ = ["Script", "ReplayResult", "StepError", "load_script", "replay_script", "trace_lines"]


class StepError(ValueError):
    """A step could not be applied; the replay stops there."""


@dataclass
class Script:
    geometry: Geometry
    start: SOD
    target: SOD
    steps: list[dict]
    facts: FactBase
    reference: Optional[SOD] = None
    case: str = ""


@dataclass
class ReplayResult:
    verdict: str
    final: SOD
    trace: list[dict]
    collapses: list[tuple[int, Collapse]] = field(default_factory=list)
    shadows: list[dict] = field(default_factory=list)
    identifications: list[tuple[str, str]] = field(default_factory=list)
    reference_ok: Optional[bool] = None
    error: Optional[str] = None

    @property
    def match(self) -> bool:
        return self.verdict == "Match"

    def facts_by_status(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for entry in self.trace:
            for f in entry.get("facts", ()):
                out[f["status"]] = out.get(f["status"], 0) + 1
        return out


def load_script(source: Union[str, Path, dict], geometry: Optional[Geometry] = None) -> Script:
    """Parse a script from a dict, a JSON string or a path."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        source = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        source = json.loads(source)
    case = source.get("case", "")
    if geometry is None:
        from .cases import get_geometry

        geometry = get_geometry(case)
    ref = source.get("reference")
    return Script(
        geometry=geometry,
        start=SOD.from_json(geometry, source["start"]),
        target=SOD.from_json(geometry, source["target"]),
        steps=list(source.get("steps", ())),
        facts=FactBase.from_json(geometry, source.get("facts")),
        reference=SOD.from_json(geometry, ref) if ref else None,
        case=case,
    )


def _apply(sod: SOD, step: dict, facts: FactBase):
    op = step["op"]
    args = step.get("args", {})
    if op == "mutate_left":
        return mutate_left(sod, int(args["k"])), [], None
    if op == "mutate_right":
        return mutate_right(sod, int(args["k"])), [], None
    if op == "transpose":
        new, used = transpose(sod, int(args["i"]), int(args["j"]), facts)
        return new, used, None
    if op == "serre_rotate":
        return serre_rotate(sod, args["positions"], args.get("direction")), [], None
    if op == "twist":
        return twist_sod(sod, sod.geometry.cls(args["by"])), [], None
    if op == "collapse":
        new, col = collapse(sod, int(args["k"]), facts)
        return new, [col.fact], col
    raise StepError(f"unknown operation {op!r}")


def _touched(sod: SOD, step: dict):
    """Positions and component keys a mutation or transposition step involves."""
    op, args = step["op"], step.get("args", {})
    if op in ("mutate_left", "mutate_right"):
        k = int(args["k"])
        pos = (k, k + 1)
    elif op == "transpose":
        i, j = int(args["i"]), int(args["j"])
        pos = tuple(range(min(i, j), max(i, j) + 1))
    else:
        return None
    if max(pos) >= len(sod):
        return None
    return op, pos, tuple(sod[p].key() for p in pos)


def _check_group(entries) -> Optional[str]:
    muts = [e for e in entries if e[0] in ("mutate_left", "mutate_right")]
    trans = [e for e in entries if e[0] == "transpose"]
    for a_i in range(len(muts)):
        for b_i in range(a_i + 1, len(muts)):
            a, b = muts[a_i], muts[b_i]
            if set(a[1]) & set(b[1]):
                return f"simultaneous mutations share positions {sorted(set(a[1]) & set(b[1]))}"
            if set(a[2]) & set(b[2]):
                return "simultaneous mutations share a component"
    pairs = [frozenset(t[2]) for t in trans]
    if len(set(pairs)) != len(pairs):
        return "a simultaneous transposition repeats a pair"
    return None


def replay_script(script: Script, check_shadows: bool = True) -> ReplayResult:
    """Run every step, recording the decomposition and the facts consumed after each."""
    geo = script.geometry
    sod = script.start
    trace = [{"step": 0, "op": "start", "sod": sod.to_json(), "text": sod.describe(), "facts": []}]
    collapses: list[tuple[int, Collapse]] = []
    groups: dict = {}
    error = None
    for n, step in enumerate(script.steps, start=1):
        group = step.get("group")
        try:
            touched = _touched(sod, step)
            if group is not None and touched is not None:
                groups.setdefault(group, []).append(touched)
                problem = _check_group(groups[group])
                if problem:
                    raise StepError(f"group {group!r}: {problem}")
            sod, used, col = _apply(sod, step, script.facts)
        except Exception as exc:  # any step failure aborts with the partial trace
            error = f"step {n} ({step.get('op')}): {exc}"
            break
        if col is not None:
            collapses.append((n, col))
        entry = {
            "step": n,
            "op": step["op"],
            "args": step.get("args", {}),
            "sod": sod.to_json(),
            "text": sod.describe(),
            "facts": [f.to_json(geo) for f in used],
        }
        for key in ("label", "group"):
            if key in step:
                entry[key] = step[key]
        trace.append(entry)

    shadows = []
    if check_shadows:
        for n, col in collapses:
            rec = shadow_additivity(geo, col.triangle)
            rec["step"] = n
            rec["triangle"] = [geo.describe_object(o) for o in col.triangle]
            shadows.append(rec)

    if error is not None:
        verdict = "Error"
    elif sod == script.target and all(s["ok"] for s in shadows):
        verdict = "Match"
    else:
        verdict = "Mismatch"
    result = ReplayResult(verdict, sod, trace, collapses, shadows, error=error)
    if script.reference is not None and error is None:
        result.reference_ok, result.identifications = _compare_reference(sod, script.reference)
    return result


def _compare_reference(final: SOD, ref: SOD):
    """Exceptional terms must agree; abstract terms in matching positions are identified."""
    if len(final) != len(ref):
        return False, []
    geo = final.geometry
    ids = []
    for a, b in zip(final.components, ref.components):
        if a.is_abstract and b.is_abstract:
            ids.append((geo.describe(a), geo.describe(b)))
        elif not a.same_as(b):
            return False, ids
    return True, ids


def trace_lines(result: ReplayResult) -> str:
    """The trace as JSON lines, one decomposition per line, then a verdict line."""
    lines = [json.dumps(e, sort_keys=True) for e in result.trace]
    tail = {
        "verdict": result.verdict,
        "shadows_ok": all(s["ok"] for s in result.shadows),
        "reference_ok": result.reference_ok,
        "identifications": result.identifications,
    }
    if result.error:
        tail["error"] = result.error
    lines.append(json.dumps(tail, sort_keys=True))
    return "\n".join(lines) + "\n"
