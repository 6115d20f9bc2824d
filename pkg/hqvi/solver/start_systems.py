"""
Explicit start solutions, one per within-level permutation orbit.
"""

from __future__ import annotations

import cmath
import math
from itertools import combinations
from typing import List, Sequence, Tuple

from hqvi.errors import EquivariantParamsDegenerate, MethodMismatch, ZeroParameter
from hqvi.models import ProblemSpec


def _roots_of(value: complex, degree: int) -> List[complex]:
    """All degree-th roots of a nonzero complex number."""
    radius = abs(value) ** (1.0 / degree)
    angle = cmath.phase(value) / degree
    return [
        cmath.rect(radius, angle + 2.0 * math.pi * a / degree)
        for a in range(degree)
    ]


def start_solutions_degeneration(spec: ProblemSpec, q_deg: Sequence[complex]) -> List[Tuple[complex, ...]]:
    """
    Start points of the degeneration homotopy at t = 0.

    Level j solves w^{r_{j+1}} = (-1)^{r_{j-1}} q'_j prod(level j-1), and takes
    every r_j-subset of those r_{j+1} roots, giving prod_j binom(r_{j+1}, r_j)
    vectors.

    Args:
        spec: Non-equivariant problem instance
        q_deg: Parameters in the degeneration sign convention

    Raises:
        ZeroParameter: some q'_j vanishes.
    """
    if spec.is_equivariant:
        raise MethodMismatch("The degeneration start system needs epsilon = 0")
    if any(qj == 0 for qj in q_deg):
        raise ZeroParameter(
            f"Degeneration start system needs nonzero q, got {list(q_deg)}",
            {"q": [str(x) for x in q_deg]},
        )

    vectors: List[Tuple[complex, ...]] = []

    def extend(j: int, prefix: Tuple[complex, ...], lower: Tuple[complex, ...]) -> None:
        if j > spec.k:
            vectors.append(prefix)
            return
        rhs = (-1) ** spec.rank(j - 1) * q_deg[j - 1] * math.prod(lower)
        roots = _roots_of(complex(rhs), spec.rank(j + 1))
        for subset in combinations(roots, spec.rank(j)):
            extend(j + 1, prefix + subset, subset)

    extend(1, (), ())
    return vectors


def start_solutions_equivariant(spec: ProblemSpec) -> List[Tuple[complex, ...]]:
    """
    Solutions at q = 0: nested subsets S_1 of S_2 of ... of S_k of {1..n}.

    Raises:
        EquivariantParamsDegenerate: epsilon not pairwise distinct.
    """
    eps = spec.eps
    for a, b in combinations(range(len(eps)), 2):
        if abs(eps[a] - eps[b]) <= 1e-10:
            raise EquivariantParamsDegenerate(
                f"Equivariant parameters {a + 1} and {b + 1} coincide",
                {"indices": [a + 1, b + 1]},
            )

    vectors: List[Tuple[complex, ...]] = []

    def descend(j: int, upper: Tuple[int, ...], chosen: List[Tuple[int, ...]]) -> None:
        if j == 0:
            levels = list(reversed(chosen))
            vectors.append(tuple(eps[i] for level in levels for i in level))
            return
        for subset in combinations(upper, spec.rank(j)):
            descend(j - 1, subset, chosen + [subset])

    descend(spec.k, tuple(range(spec.ambient_rank)), [])
    return vectors
