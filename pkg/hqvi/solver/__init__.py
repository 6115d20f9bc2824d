"""
Homotopy-continuation solver for the Bethe system.
"""

from .start_systems import start_solutions_degeneration, start_solutions_equivariant
from .tracker import (
    ComplexArc,
    DegenerationFamily,
    EquivariantFamily,
    track_path,
    newton_polish,
    polish_extended,
)
from .solve import solve, refine_solution_set, canonical_form, canonical_key, same_orbit

__all__ = [
    "start_solutions_degeneration",
    "start_solutions_equivariant",
    "ComplexArc",
    "DegenerationFamily",
    "EquivariantFamily",
    "track_path",
    "newton_polish",
    "polish_extended",
    "solve",
    "refine_solution_set",
    "canonical_form",
    "canonical_key",
    "same_orbit",
]
