"""
Core arithmetic: validation, virtual dimension, degree support and insertions.
"""

from .spec import (
    validate_spec,
    virtual_dimension,
    relative_virtual_dimensions,
    degree_support,
    uses_chain_bound,
    reduce_bundle_degree,
)
from .insertion import parse_insertion, validate_insertion

__all__ = [
    "validate_spec",
    "virtual_dimension",
    "relative_virtual_dimensions",
    "degree_support",
    "uses_chain_bound",
    "reduce_bundle_degree",
    "parse_insertion",
    "validate_insertion",
]
