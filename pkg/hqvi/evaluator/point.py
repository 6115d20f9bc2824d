"""
Right-hand side of the main formula at one parameter point.
"""

from __future__ import annotations

import cmath
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from hqvi.config import FitSettings, Method, Precision, SolverSettings, get_logger, settings
from hqvi.errors import InputError, JNearZero, NumericFailure
from hqvi.models import (
    BetheSolution,
    ElemSym,
    Insertion,
    PointValue,
    Primitive,
    ProblemSpec,
    SignMode,
    SolutionSet,
)
from hqvi.system import BetheSystem, to_extended
from hqvi.utils import derive_seed

logger = get_logger("evaluator")

LOG_POWER_THRESHOLD = 16


def elementary_symmetric(values: Sequence[Any]) -> List[Any]:
    """e_0..e_r via the coefficients of prod (X + x)."""
    coeffs: List[Any] = [1] + [0] * len(values)
    for count, x in enumerate(values, start=1):
        for i in range(count, 0, -1):
            coeffs[i] = coeffs[i] + x * coeffs[i - 1]
    return coeffs


def complex_power(base: Any, exponent: int) -> Any:
    """Binary exponentiation; negative exponents invert first."""
    if exponent < 0:
        base, exponent = 1 / base, -exponent
    result: Any = 1
    while exponent:
        if exponent & 1:
            result = result * base
        base = base * base
        exponent >>= 1
    return result


def _primitive_value(prim: Primitive, levels: List[Tuple[Any, ...]], top: Sequence[Any]) -> Any:
    if isinstance(prim, ElemSym):
        return elementary_symmetric(levels[prim.j - 1])[prim.i]
    lower = levels[prim.level - 1]
    upper = levels[prim.level] if prim.level < len(levels) else top
    value: Any = 1
    for x in lower:
        for u in upper:
            value = value * (x - u)
    return value


def eval_insertion(insertion: Insertion, sol: BetheSolution, spec: ProblemSpec) -> Any:
    """
    Evaluate an insertion at a solution.

    ElemSym(i, j) is e_i of the level-j entries; EulerCross(l) is the product
    of differences between levels l and l+1, with epsilon above level k.
    """
    levels = sol.levels(spec)
    top = to_extended(spec.eps) if sol.z_extended is not None else spec.eps
    cache: Dict[Primitive, Any] = {}
    total: Any = 0
    for term in insertion.terms:
        value: Any = term.coefficient
        for prim in term.primitives:
            if prim not in cache:
                cache[prim] = _primitive_value(prim, levels, top)
            value = value * cache[prim]
        total = total + value
    return total


def _log_power_sum(terms: Sequence[Tuple[complex, complex]], exponent: int) -> complex:
    """sum w_i J_i^exponent with magnitudes kept as logarithms until the end."""
    logs: List[Tuple[float, float]] = []
    for weight, j in terms:
        if weight == 0:
            continue
        log_mag = math.log(abs(weight)) + exponent * math.log(abs(j))
        phase = cmath.phase(weight) + exponent * cmath.phase(j)
        logs.append((log_mag, phase))
    if not logs:
        return 0j
    peak = max(lm for lm, _ in logs)
    total = sum(cmath.rect(math.exp(lm - peak), ph) for lm, ph in logs)
    try:
        return total * math.exp(peak)
    except OverflowError as exc:
        raise NumericFailure(f"Point value overflows (log magnitude {peak:.1f})") from exc


def eval_point(
    spec: ProblemSpec,
    insertion: Insertion,
    sols: SolutionSet,
    options: Optional[FitSettings] = None,
) -> PointValue:
    """
    Sum insertion * J^(g-1) over the orbit representatives.

    The orbit weight cancels the 1/prod r_j! of the formula exactly.

    Raises:
        JNearZero: genus 0 and some |J| below the floor.
        NumericFailure: the value is not finite.
    """
    opts = options or settings.fit
    system = BetheSystem(sols.spec, sols.q, SignMode.FORMULA)
    exponent = spec.genus - 1
    extended_mode = any(rep.z_extended is not None for rep in sols.representatives)

    terms: List[Tuple[Any, Any]] = []
    for rep in sols.representatives:
        j_value = system.eval_J_factor(rep)
        if spec.genus == 0 and abs(complex(j_value)) < opts.j_floor:
            raise JNearZero(
                f"|J| = {abs(complex(j_value)):.3e} at genus 0; resample q",
                {"q": [str(x) for x in sols.q]},
            )
        terms.append((eval_insertion(insertion, rep, spec), j_value))

    magnitude = 0.0
    extended_value = None
    if extended_mode:
        extended_value = sum((w * j_value ** exponent for w, j_value in terms), 0)
        value = complex(extended_value)
        magnitude = float(sum(abs(w) * abs(j_value) ** exponent for w, j_value in terms))
    elif abs(exponent) >= LOG_POWER_THRESHOLD:
        value = _log_power_sum([(complex(w), complex(j)) for w, j in terms], exponent)
        magnitude = float(sum(
            math.exp(math.log(abs(w)) + exponent * math.log(abs(j))) for w, j in terms if w != 0
        ))
    else:
        value = sum((w * complex_power(j, exponent) for w, j in terms), 0j)
        magnitude = float(sum(abs(w) * abs(complex_power(j, exponent)) for w, j in terms))

    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericFailure("Point value is not finite", {"q": [str(x) for x in sols.q]})

    return PointValue(
        value=value,
        q=tuple(sols.q),
        eps=tuple(sols.spec.eps),
        solution_count_used=len(sols.representatives),
        worst_condition=max((r.jacobian_condition for r in sols.representatives), default=0.0),
        magnitude=magnitude,
        extended_value=extended_value,
    )


def genus_shift_check(spec: ProblemSpec, insertion: Insertion, sols: SolutionSet) -> Tuple[complex, complex]:
    """
    Compare eval_point at genus g+1 with sum w_i J_i, w_i = insertion_i J_i^(g-1).

    Both sides are the same sum computed along different routes.
    """
    system = BetheSystem(sols.spec, sols.q, SignMode.FORMULA)
    rhs = 0j
    for rep in sols.representatives:
        j_value = complex(system.eval_J_factor(rep))
        weight = complex(eval_insertion(insertion, rep, spec)) * complex_power(j_value, spec.genus - 1)
        rhs += weight * j_value
    lhs = eval_point(spec.replace(genus=spec.genus + 1), insertion, sols).value
    return lhs, rhs


def extrapolate_to_nonequivariant(values: Sequence[Any], scales: Sequence[float]) -> Any:
    """
    Polynomial extrapolation to epsilon -> 0.

    ``values[i]`` is the point value at epsilon scaled by ``scales[i]``; the
    Lagrange interpolant through those nodes is evaluated at zero.
    """
    if len(values) != len(scales) or not values:
        raise InputError("values and scales must be non-empty and of equal length")
    total: Any = 0
    for i, (v, si) in enumerate(zip(values, scales)):
        weight = 1.0
        for m, sm in enumerate(scales):
            if m != i:
                weight *= sm / (sm - si)
        total = total + weight * v
    return total


def eval_point_limit(
    spec: ProblemSpec,
    insertion: Insertion,
    q: Sequence[complex],
    eps_direction: Sequence[complex],
    scales: Optional[Sequence[float]] = None,
    options: Optional[SolverSettings] = None,
    seed: Union[int, Sequence[int]] = 0,
    precision: Precision = Precision.F64,
) -> PointValue:
    """
    Non-equivariant point value reached through the equivariant solver.

    Solves at epsilon = s * eps_direction for every scale s and extrapolates
    the point values to s = 0.
    """
    from hqvi.solver import solve

    scales = list(scales or settings.equivariant.richardson_scales)
    values, extended_values, points = [], [], []
    for index, s in enumerate(scales):
        scaled = spec.replace(equivariant_params=tuple(s * complex(e) for e in eps_direction))
        sols = solve(scaled, q, method=Method.EQUIVARIANT, options=options, seed=derive_seed(seed, index), precision=precision)
        point = eval_point(scaled, insertion, sols)
        points.append(point)
        values.append(point.value)
        extended_values.append(point.best_value())

    limit_ext = None
    if precision == Precision.DD:
        limit_ext = extrapolate_to_nonequivariant(extended_values, scales)
    limit = complex(extrapolate_to_nonequivariant(values, scales))
    logger.debug(f"Extrapolated equivariant values {values} to {limit}")
    return PointValue(
        value=limit if limit_ext is None else complex(limit_ext),
        q=tuple(complex(x) for x in q),
        eps=(0j,) * spec.ambient_rank,
        solution_count_used=sum(p.solution_count_used for p in points),
        worst_condition=max(p.worst_condition for p in points),
        magnitude=max(p.magnitude for p in points),
        extended_value=limit_ext,
    )
