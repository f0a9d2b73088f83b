"""Intrinsic reflections in Coxeter systems: diagrams, words, rewrites and checks."""
__version__ = "0.1.0"

from .diagram import INF, CoxeterMatrix, irreducible_components, parse_diagram
from .errors import CoxToolError
from .intrinsic import decide_intrinsic
from .transforms import blow_down, diagram_twist, eliminate_reflection, s_translation
from .words import Element, enumerate_group, reduce

__all__ = [
    "INF",
    "CoxeterMatrix",
    "CoxToolError",
    "Element",
    "blow_down",
    "decide_intrinsic",
    "diagram_twist",
    "eliminate_reflection",
    "enumerate_group",
    "irreducible_components",
    "parse_diagram",
    "reduce",
    "s_translation",
]
