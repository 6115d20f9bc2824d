"""
The Bethe-type polynomial system, its Jacobian and the J factor.

Level j of a flat vector z holds r_j unknowns. Level 0 is empty and level k+1
is the epsilon vector. Every equation has the shape

    prod_a (z_{s,j} - t z_{a,j+1}) + c_j prod_b (t z_{s,j} - z_{b,j-1})

where t = 1 gives the target system and c_j is the sign-adjusted coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from hqvi.config import get_logger
from hqvi.errors import DegenerateSolution, InputError
from hqvi.models import BetheSolution, ProblemSpec, SignMode
from .precision import extended, extended_det, extended_solve, to_extended

logger = get_logger("system")

LOG_DELTA_THRESHOLD = 12


def sign_convert_q(
    spec: ProblemSpec,
    q: Sequence[complex],
    source: SignMode,
    target: SignMode,
) -> Tuple[complex, ...]:
    """
    Move q between sign conventions.

    q_j picks up (-1)^(r_j - r_{j-1} + 1); the map is its own inverse.
    """
    if source == target:
        return tuple(q)
    return tuple(
        -qj if (spec.rank(j) - spec.rank(j - 1) + 1) % 2 else qj
        for j, qj in enumerate(q, start=1)
    )


def coupling_constants(spec: ProblemSpec, q: Sequence[Any], sign_mode: SignMode) -> List[Any]:
    """Coefficient c_j of the lower-level product in equation j."""
    if sign_mode == SignMode.FORMULA:
        return [qj if (spec.rank(j) - spec.rank(j - 1)) % 2 == 0 else -qj for j, qj in enumerate(q, start=1)]
    return [-qj for qj in q]


def _prod(values: Sequence[Any]) -> Any:
    result = 1
    for v in values:
        result = result * v
    return result


def _prod_except(values: Sequence[Any]) -> List[Any]:
    """Products omitting one factor each, without division."""
    n = len(values)
    prefix, suffix = [1] * (n + 1), [1] * (n + 1)
    for i, v in enumerate(values):
        prefix[i + 1] = prefix[i] * v
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] * values[i]
    return [prefix[i] * suffix[i + 1] for i in range(n)]


@dataclass
class FamilyEvaluation:
    """Values of one member of the t-family, as plain lists."""
    values: List[Any]
    jacobian: Optional[List[List[Any]]] = None
    t_derivative: Optional[List[Any]] = None
    lower_products: Optional[List[Any]] = None


def evaluate_family(
    spec: ProblemSpec,
    coupling: Sequence[Any],
    z: Sequence[Any],
    top: Sequence[Any],
    t: Any = 1,
    jacobian: bool = False,
    t_derivative: bool = False,
) -> FamilyEvaluation:
    """
    Evaluate every equation of the family at (z, t).

    Works for complex and extended-precision entries alike.

    Args:
        spec: Problem instance fixing the level sizes
        coupling: c_1..c_k
        z: Flat unknowns
        top: Level k+1 values (epsilon)
        t: Homotopy parameter inside the products
        jacobian: Also return dF/dz
        t_derivative: Also return dF/dt and the lower-level products

    Returns:
        FamilyEvaluation
    """
    offsets = spec.level_offsets
    levels: List[Sequence[Any]] = [()]
    for off, r in zip(offsets, spec.ranks):
        levels.append(z[off:off + r])
    levels.append(top)

    size = spec.total_vars
    values: List[Any] = [0] * size
    jac = [[0] * size for _ in range(size)] if jacobian else None
    dt = [0] * size if t_derivative else None
    lower_products = [0] * size if t_derivative else None

    for j in range(1, spec.k + 1):
        upper, lower, c = levels[j + 1], levels[j - 1], coupling[j - 1]
        for s, x in enumerate(levels[j]):
            row = offsets[j - 1] + s
            a_factors = [x - t * u for u in upper]
            b_factors = [t * x - w for w in lower]
            b_prod = _prod(b_factors)
            values[row] = _prod(a_factors) + c * b_prod
            if not (jacobian or t_derivative):
                continue
            a_except = _prod_except(a_factors)
            b_except = _prod_except(b_factors)
            if jac is not None:
                jac[row][row] = sum(a_except) + c * t * sum(b_except)
                if j < spec.k:
                    base = offsets[j]
                    for a, val in enumerate(a_except):
                        jac[row][base + a] = -t * val
                if j > 1:
                    base = offsets[j - 2]
                    for b, val in enumerate(b_except):
                        jac[row][base + b] = -c * val
            if dt is not None:
                dt[row] = sum(-u * val for u, val in zip(upper, a_except)) + c * x * sum(b_except)
                lower_products[row] = b_prod
    return FamilyEvaluation(values, jac, dt, lower_products)


class BetheSystem:
    """
    The Bethe system at a fixed parameter point.

    Immutable after construction; every evaluation is pure.
    """

    def __init__(self, spec: ProblemSpec, q: Sequence[complex], sign_mode: SignMode = SignMode.FORMULA) -> None:
        if len(q) != spec.k:
            raise InputError(f"Expected {spec.k} parameters q, got {len(q)}", {"q_length": len(q)})
        self.spec = spec
        self.q = tuple(complex(x) for x in q)
        self.sign_mode = sign_mode
        self.total_vars = spec.total_vars
        self.level_offsets = spec.level_offsets
        self.coupling = tuple(coupling_constants(spec, self.q, sign_mode))
        self.eps = spec.eps

    def __repr__(self) -> str:
        return f"BetheSystem(ranks={list(self.spec.ranks)}, n={self.spec.ambient_rank}, sign_mode={self.sign_mode.value})"

    @property
    def residual_tolerance_scale(self) -> float:
        return 1.0 + max(abs(x) for x in self.q)

    def _check_length(self, z: Sequence[Any]) -> None:
        if len(z) != self.total_vars:
            raise InputError(f"Expected {self.total_vars} unknowns, got {len(z)}")

    def eval_system(self, z: Sequence[complex]) -> np.ndarray:
        self._check_length(z)
        fam = evaluate_family(self.spec, self.coupling, list(z), self.eps)
        return np.array(fam.values, dtype=complex)

    def eval_jacobian(self, z: Sequence[complex]) -> np.ndarray:
        self._check_length(z)
        fam = evaluate_family(self.spec, self.coupling, list(z), self.eps, jacobian=True)
        return np.array(fam.jacobian, dtype=complex)

    def eval_extended(self, z: Sequence[Any]) -> FamilyEvaluation:
        """Values and Jacobian with extended-precision coefficients."""
        self._check_length(z)
        return evaluate_family(
            self.spec,
            to_extended(self.coupling),
            to_extended(z),
            to_extended(self.eps),
            jacobian=True,
        )

    def residual_norm(self, z: Sequence[Any]) -> float:
        if any(hasattr(v, "_mpc_") for v in z):
            return float(max(abs(v) for v in self.eval_extended(z).values))
        return float(np.max(np.abs(self.eval_system(z)))) if self.total_vars else 0.0

    def min_separation(self, z: Sequence[Any]) -> float:
        """Smallest within-level distance; inf when every level has one entry."""
        best = math.inf
        for off, r in zip(self.level_offsets, self.spec.ranks):
            for a, b in combinations(range(off, off + r), 2):
                best = min(best, float(abs(z[a] - z[b])))
        return best

    def jacobian_condition(self, z: Sequence[complex]) -> float:
        jac = self.eval_jacobian([complex(v) for v in z])
        try:
            return float(np.linalg.cond(jac))
        except np.linalg.LinAlgError:
            return math.inf

    def newton_step_extended(self, z: Sequence[Any]) -> Tuple[List[Any], Any]:
        """One Newton update in extended precision; returns (z_new, |update|)."""
        fam = self.eval_extended(z)
        delta = extended_solve(fam.jacobian, [-v for v in fam.values])
        z_ext = to_extended(z)
        return [a + b for a, b in zip(z_ext, delta)], max(abs(d) for d in delta)

    def delta_product(self, levels: Sequence[Sequence[Any]]) -> Any:
        """
        prod over levels of prod_{a != b} (x_a - x_b).

        Accumulated as log-magnitude plus phase when there are more than 12
        unknowns and the entries are plain complex.
        """
        pairs = [(x, y) for level in levels for x, y in combinations(level, 2)]
        signs = sum(len(level) * (len(level) - 1) // 2 for level in levels) % 2
        sign = -1 if signs else 1
        if self.total_vars > LOG_DELTA_THRESHOLD and not any(hasattr(x, "_mpc_") for x, _ in pairs):
            log_mag, phase = 0.0, 0.0
            for x, y in pairs:
                diff = complex(x - y)
                log_mag += 2.0 * math.log(abs(diff))
                phase += 2.0 * math.atan2(diff.imag, diff.real)
            return sign * complex(math.cos(phase), math.sin(phase)) * math.exp(log_mag)
        result = 1
        for x, y in pairs:
            diff = x - y
            result = result * diff * diff
        return sign * result

    def eval_J_factor(self, sol: BetheSolution) -> Any:
        """
        det(Jacobian) / prod_l Delta(zeta_l) at a non-degenerate solution.

        Evaluated in extended precision when the solution carries an
        extended-precision polish.

        Raises:
            DegenerateSolution: min_separation <= tol_sep.
        """
        if sol.min_separation <= sol.separation_tolerance:
            raise DegenerateSolution(
                f"Solution has coincident entries (min separation {sol.min_separation:.3e})",
                {"min_separation": sol.min_separation},
            )
        values = sol.values()
        levels = [values[off:off + r] for off, r in zip(self.level_offsets, self.spec.ranks)]
        if sol.z_extended is not None:
            det = extended_det(self.eval_extended(values).jacobian)
        else:
            det = complex(np.linalg.det(self.eval_jacobian(values)))
        return det / self.delta_product(levels)


def eval_system(system: BetheSystem, z: Sequence[complex]) -> np.ndarray:
    """Entry (i, j) is the level-j equation at z_{i,j}."""
    return system.eval_system(z)


def eval_jacobian(system: BetheSystem, z: Sequence[complex]) -> np.ndarray:
    """Dense Jacobian; nonzero only within a level and its two neighbours."""
    return system.eval_jacobian(z)


def eval_J_factor(system: BetheSystem, sol: BetheSolution) -> Any:
    return system.eval_J_factor(sol)


def make_solution(
    system: BetheSystem,
    z: Sequence[Any],
    separation_factor: float,
    extended_values: Optional[Sequence[Any]] = None,
) -> BetheSolution:
    """Measure a candidate point and wrap it as a BetheSolution."""
    point = list(extended_values) if extended_values is not None else list(z)
    z_c = tuple(complex(v) for v in point)
    scale = 1.0 + max((abs(v) for v in z_c), default=0.0)
    tol_sep = separation_factor * scale
    separation = system.min_separation(point)
    return BetheSolution(
        z=z_c,
        residual_norm=system.residual_norm(point),
        min_separation=separation,
        jacobian_condition=system.jacobian_condition(z_c),
        separation_tolerance=tol_sep,
        near_degenerate=tol_sep < separation <= 10 * tol_sep,
        z_extended=tuple(extended_values) if extended_values is not None else None,
    )
