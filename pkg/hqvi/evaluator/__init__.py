"""
Point evaluation of the main formula.
"""

from .point import (
    elementary_symmetric,
    complex_power,
    eval_insertion,
    eval_point,
    genus_shift_check,
    extrapolate_to_nonequivariant,
    eval_point_limit,
)

__all__ = [
    "elementary_symmetric",
    "complex_power",
    "eval_insertion",
    "eval_point",
    "genus_shift_check",
    "extrapolate_to_nonequivariant",
    "eval_point_limit",
]
