"""
Closed-form reference values used as independent ground truth.
"""

from .closed_forms import (
    MaximalSubsheafFactor,
    maximal_subsheaf_count,
    oracle_maximal_subsheaf_factor,
    oracle_points,
    oracle_points_segre,
    oracle_quot_k1,
    oracle_quot_k1_coefficient,
    oracle_quot_k1_polynomial,
    oracle_two_step,
    points_insertion,
    quot_k1_degree,
    segre_class,
    segre_insertion,
    two_step_degree,
    two_step_insertion,
    two_step_solutions,
)

__all__ = [
    "MaximalSubsheafFactor",
    "maximal_subsheaf_count",
    "oracle_maximal_subsheaf_factor",
    "oracle_points",
    "oracle_points_segre",
    "oracle_quot_k1",
    "oracle_quot_k1_coefficient",
    "oracle_quot_k1_polynomial",
    "oracle_two_step",
    "points_insertion",
    "quot_k1_degree",
    "segre_class",
    "segre_insertion",
    "two_step_degree",
    "two_step_insertion",
    "two_step_solutions",
]
