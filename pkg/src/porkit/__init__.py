"""porkit: poly-time oracle recursive functions, the RL word language, a
typed lambda calculus, while-programs and stream machines, with exact
distribution semantics for all of them."""

from .bits import concat, dy, dyad, parse_bits, format_bits, times, truncate
from .measure import (CylinderSet, Distribution, Dyadic, Oracle, cylinder_boolean,
                      cylinder_measure, extractor_e)
from .por import BRec, C, Comp, E, P, Q, S, eval_dist, eval_por, parse_por, size_bound
from .por_lib import corpus, stdlib
from .harness import build_pipeline, check_stage_equivalence

__version__ = "0.1.0"

__all__ = [
    "concat", "dy", "dyad", "parse_bits", "format_bits", "times", "truncate",
    "CylinderSet", "Distribution", "Dyadic", "Oracle", "cylinder_boolean",
    "cylinder_measure", "extractor_e",
    "BRec", "C", "Comp", "E", "P", "Q", "S", "eval_dist", "eval_por", "parse_por",
    "size_bound", "corpus", "stdlib", "build_pipeline", "check_stage_equivalence",
]
