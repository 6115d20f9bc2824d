"""
Interpolation of exact generating polynomials from point values.
"""

from .sampling import sample_parameters, sampling_radii, monomial_spread
from .fit import fit_polynomial
from .pipeline import ComputeOptions, compute, seeded_eps_direction

__all__ = [
    "sample_parameters",
    "sampling_radii",
    "monomial_spread",
    "fit_polynomial",
    "ComputeOptions",
    "compute",
    "seeded_eps_direction",
]
