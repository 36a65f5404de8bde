"""Symbolic mutation calculus on semiorthogonal decompositions."""

from .cases import CASES, builtin_script, get_geometry, plane_geometry, singular_geometry
from .engine import (
    SOD,
    Collapse,
    Fact,
    FactBase,
    MissingFact,
    NoCollapseRule,
    collapse,
    collapse_exceptional_mutation,
    hilbert_shadow,
    mutate_left,
    mutate_right,
    serre_rotate,
    shadow_additivity,
    transpose,
    twist_sod,
)
from .geometry import Geometry, NoOracle, Subvariety
from .replay import ReplayResult, Script, StepError, load_script, replay_script, trace_lines
from .terms import (
    Component,
    LeftMut,
    LineBundle,
    Named,
    OpaqueObject,
    PushforwardLB,
    RightMut,
    Shift,
    Twist,
    normalize_word,
    shift,
    unshift,
)

__all__ = [
    "CASES", "builtin_script", "get_geometry", "plane_geometry", "singular_geometry",
    "SOD", "Collapse", "Fact", "FactBase", "MissingFact", "NoCollapseRule", "collapse",
    "collapse_exceptional_mutation", "hilbert_shadow", "mutate_left", "mutate_right", "serre_rotate",
    "shadow_additivity", "transpose", "twist_sod", "Geometry", "NoOracle", "Subvariety",
    "ReplayResult", "Script", "StepError", "load_script", "replay_script", "trace_lines",
    "Component", "LeftMut", "LineBundle", "Named", "OpaqueObject", "PushforwardLB", "RightMut",
    "Shift", "Twist", "normalize_word", "shift", "unshift",
]
