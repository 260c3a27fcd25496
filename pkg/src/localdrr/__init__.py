"""Exact computations with the Contou-Carrere symbol, cup-product cocycles and the
determinant cocycle on the group of multipliers and automorphisms of A((t)),
for A a finite-dimensional local Q-algebra with nilpotent generators."""

from .nilring import QQ, RingElem, RingSpec, adjoin_duals
from .laurent import (
    DEFAULT_PREC,
    INF,
    LaurentSeries,
    PrecisionError,
    comp_inverse,
    compose,
    factorize_aut,
    factorize_unit,
    invert,
    residue,
    working_precision,
)
from .groupg import GroupElem, LieElem, g_inv, g_mul, lie_bracket, membership
from .ccsymbol import cc, cc_exact, cc_explog
from .cocycles import delta, named_two_cocycle
from .detext import det_cocycle_D, lie_extract, lie_trace, solve_direct_sum
from .parser import parse_value, render_value
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "QQ", "RingElem", "RingSpec", "adjoin_duals",
    "DEFAULT_PREC", "INF", "LaurentSeries", "PrecisionError", "comp_inverse", "compose", "factorize_aut",
    "factorize_unit", "invert", "residue", "working_precision",
    "GroupElem", "LieElem", "g_inv", "g_mul", "lie_bracket", "membership",
    "cc", "cc_exact", "cc_explog",
    "delta", "named_two_cocycle",
    "det_cocycle_D", "lie_extract", "lie_trace", "solve_direct_sum",
    "parse_value", "render_value",
    "run_suite",
]
