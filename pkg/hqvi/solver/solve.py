"""
Complete non-degenerate solution sets by homotopy continuation.
"""

from __future__ import annotations

import time
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from hqvi.config import Method, Precision, SolverSettings, get_logger, settings
from hqvi.core import validate_spec
from hqvi.errors import IncompleteSolutionSet, InputError, MethodMismatch
from hqvi.models import (
    BetheSolution,
    HomotopyPath,
    PathStatus,
    ProblemSpec,
    SignMode,
    SolutionSet,
    SolutionSetStatus,
)
from hqvi.system import BetheSystem, sign_convert_q
from hqvi.utils import derive_seed, format_duration
from .start_systems import start_solutions_degeneration, start_solutions_equivariant
from .tracker import ComplexArc, DegenerationFamily, EquivariantFamily, polish_extended, track_path

logger = get_logger("solver")


def _grid_key(value: complex, tol: float) -> Tuple[int, int]:
    return (round(value.real / tol), round(value.imag / tol))


def canonical_form(sol: BetheSolution, spec: ProblemSpec) -> BetheSolution:
    """Sort the entries of every level by their rounded (real, imag) grid key."""
    tol = sol.separation_tolerance or 1e-6
    order: List[int] = []
    for off, r in zip(spec.level_offsets, spec.ranks):
        order.extend(sorted(range(off, off + r), key=lambda i: _grid_key(sol.z[i], tol)))
    return BetheSolution(
        z=tuple(sol.z[i] for i in order),
        residual_norm=sol.residual_norm,
        min_separation=sol.min_separation,
        jacobian_condition=sol.jacobian_condition,
        separation_tolerance=sol.separation_tolerance,
        near_degenerate=sol.near_degenerate,
        z_extended=tuple(sol.z_extended[i] for i in order) if sol.z_extended is not None else None,
    )


def canonical_key(sol: BetheSolution) -> Tuple[Tuple[int, int], ...]:
    tol = sol.separation_tolerance or 1e-6
    return tuple(_grid_key(v, tol) for v in sol.z)


def same_orbit(a: BetheSolution, b: BetheSolution, spec: ProblemSpec) -> bool:
    """True when b is a within-level permutation of a up to tol_sep."""
    tol = max(a.separation_tolerance, b.separation_tolerance)
    for off, r in zip(spec.level_offsets, spec.ranks):
        remaining = list(b.z[off:off + r])
        for x in a.z[off:off + r]:
            match = next((idx for idx, y in enumerate(remaining) if abs(x - y) <= tol), None)
            if match is None:
                return False
            remaining.pop(match)
    return True


def _prepare(spec: ProblemSpec, q: Tuple[complex, ...], method: Method):
    if method == Method.DEGENERATION:
        if spec.is_equivariant:
            raise MethodMismatch("Degeneration method requires epsilon = 0; use the equivariant method")
        q_deg = sign_convert_q(spec, q, SignMode.FORMULA, SignMode.DEGENERATION)
        target = BetheSystem(spec, q_deg, SignMode.DEGENERATION)
        return DegenerationFamily(target), start_solutions_degeneration(spec, q_deg)
    if not spec.is_equivariant:
        raise MethodMismatch("Equivariant method requires pairwise distinct epsilon")
    target = BetheSystem(spec, q, SignMode.FORMULA)
    return EquivariantFamily(target), start_solutions_equivariant(spec)


def solve(
    spec: ProblemSpec,
    q: Sequence[complex],
    eps: Optional[Sequence[complex]] = None,
    method: Method = Method.DEGENERATION,
    options: Optional[SolverSettings] = None,
    seed: Union[int, Sequence[int]] = 0,
    precision: Precision = Precision.F64,
    raise_on_incomplete: bool = True,
) -> SolutionSet:
    """
    Find one representative of every non-degenerate solution orbit at q.

    Args:
        spec: Problem instance
        q: Parameters in the main-formula sign convention
        eps: Overrides the spec's equivariant parameters when given
        method: Degeneration (epsilon = 0) or Equivariant (distinct epsilon)
        options: Solver settings
        seed: Seed (or seed parts) for the randomized arcs
        precision: dd polishes endpoints in extended precision
        raise_on_incomplete: Raise instead of returning an incomplete set

    Returns:
        SolutionSet with canonical representatives

    Raises:
        IncompleteSolutionSet: orbit count mismatch after all retries.
    """
    opts = options or settings.solver
    if eps is not None:
        spec = spec.replace(equivariant_params=tuple(eps))
    spec = validate_spec(spec)
    q = tuple(complex(x) for x in q)
    if len(q) != spec.k:
        raise InputError(f"Expected {spec.k} parameters q, got {len(q)}", {"q_length": len(q)})

    started = time.perf_counter()
    family, starts = _prepare(spec, q, method)
    expected = spec.expected_orbit_count

    tracked = [0]

    def run(index: int, attempt: int) -> HomotopyPath:
        tracked[0] += 1
        rng = np.random.default_rng(derive_seed(seed, index, attempt))
        arc = ComplexArc.randomized(rng, opts.arc_bow)
        return track_path(family, starts[index], arc, opts, Precision.F64, attempt)

    paths: List[HomotopyPath] = [run(i, 0) for i in range(len(starts))]
    retries_used = 0

    def classify() -> Tuple[Dict[int, BetheSolution], List[int]]:
        accepted: Dict[int, BetheSolution] = {}
        suspicious = set()
        for idx, path in enumerate(paths):
            if not path.converged:
                suspicious.add(idx)
                continue
            clash = next((j for j, rep in accepted.items() if same_orbit(rep, path.end, spec)), None)
            if clash is not None:
                suspicious.update({idx, clash})
            accepted[idx] = path.end
        return {i: s for i, s in accepted.items() if i not in suspicious}, sorted(suspicious)

    accepted, suspicious = classify()
    for attempt in range(1, opts.retries + 1):
        if not suspicious:
            break
        retries_used = attempt
        logger.warning(
            f"{len(suspicious)} of {len(paths)} paths failed or collided; retrying with fresh arcs (attempt {attempt})"
        )
        for idx in suspicious:
            paths[idx] = run(idx, attempt)
        accepted, suspicious = classify()

    reps = [canonical_form(sol, spec) for sol in accepted.values()]
    if precision == Precision.DD:
        target = family.target
        reps = [canonical_form(polish_extended(target, sol, opts), spec) for sol in reps]
    reps.sort(key=canonical_key)

    status = SolutionSetStatus.COMPLETE if len(reps) == expected else SolutionSetStatus.INCOMPLETE
    diagnostics = {
        "method": method.value,
        "precision": precision.value,
        "paths_tracked": tracked[0],
        "path_failures": sum(1 for p in paths if not p.converged),
        "retries": retries_used,
        "steps_total": sum(p.steps_taken for p in paths),
        "worst_residual": max((r.residual_norm for r in reps), default=0.0),
        "worst_condition": max((r.jacobian_condition for r in reps), default=0.0),
        "near_degenerate": sum(1 for r in reps if r.near_degenerate),
        "representatives_found": len(reps),
        "expected_orbit_count": expected,
    }
    logger.debug(
        f"Solved ranks={list(spec.ranks)} n={spec.ambient_rank}: {len(reps)}/{expected} orbits "
        f"in {format_duration(time.perf_counter() - started)}"
    )

    solution_set = SolutionSet(
        spec=spec,
        q=q,
        representatives=reps,
        orbit_weight=spec.orbit_weight,
        expected_orbit_count=expected,
        status=status,
        diagnostics=diagnostics,
        paths=paths,
    )
    if status == SolutionSetStatus.INCOMPLETE and raise_on_incomplete:
        raise IncompleteSolutionSet(
            f"Found {len(reps)} of {expected} solution orbits; resample q",
            diagnostics,
        )
    return solution_set


def refine_solution_set(sols: SolutionSet, options: Optional[SolverSettings] = None) -> SolutionSet:
    """Re-polish every representative of a solved set in extended precision."""
    opts = options or settings.solver
    target = BetheSystem(sols.spec, sols.q, SignMode.FORMULA)
    reps = [canonical_form(polish_extended(target, rep, opts), sols.spec) for rep in sols.representatives]
    reps.sort(key=canonical_key)
    return SolutionSet(
        spec=sols.spec,
        q=sols.q,
        representatives=reps,
        orbit_weight=sols.orbit_weight,
        expected_orbit_count=sols.expected_orbit_count,
        status=sols.status,
        diagnostics={**sols.diagnostics, "precision": Precision.DD.value},
        paths=sols.paths,
    )
