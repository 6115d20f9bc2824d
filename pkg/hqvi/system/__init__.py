"""
Bethe-type polynomial system: evaluation, Jacobian and J factor.
"""

from .bethe import (
    BetheSystem,
    FamilyEvaluation,
    evaluate_family,
    coupling_constants,
    sign_convert_q,
    eval_system,
    eval_jacobian,
    eval_J_factor,
    make_solution,
)
from .precision import extended, to_extended, EXTENDED_BITS

__all__ = [
    "BetheSystem",
    "FamilyEvaluation",
    "evaluate_family",
    "coupling_constants",
    "sign_convert_q",
    "eval_system",
    "eval_jacobian",
    "eval_J_factor",
    "make_solution",
    "extended",
    "to_extended",
    "EXTENDED_BITS",
]
