"""
Predictor-corrector path tracking for the two homotopy families.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from hqvi.config import Precision, SolverSettings, get_logger, settings
from hqvi.models import BetheSolution, HomotopyPath, PathStatus
from hqvi.system import BetheSystem, evaluate_family, make_solution

logger = get_logger("solver.tracker")


class DegenerationFamily:
    """
    H(z, t) with t inside the level products; t = 0 is the start system and
    t = 1 the target system in the degeneration sign convention.
    """

    def __init__(self, target: BetheSystem) -> None:
        self.target = target
        self.spec = target.spec

    def evaluate(self, z: np.ndarray, t: complex) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        fam = evaluate_family(
            self.spec, self.target.coupling, list(z), self.target.eps, t,
            jacobian=True, t_derivative=True,
        )
        return (
            np.array(fam.values, dtype=complex),
            np.array(fam.jacobian, dtype=complex),
            np.array(fam.t_derivative, dtype=complex),
        )


class EquivariantFamily:
    """F(z; s q, eps) for s from 0 to 1, starting at the nested epsilon subsets."""

    def __init__(self, target: BetheSystem) -> None:
        self.target = target
        self.spec = target.spec

    def evaluate(self, z: np.ndarray, s: complex) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        coupling = [s * c for c in self.target.coupling]
        fam = evaluate_family(
            self.spec, coupling, list(z), self.target.eps,
            jacobian=True, t_derivative=True,
        )
        ds = [c * b for c, b in zip(self._row_coupling(), fam.lower_products)]
        return (
            np.array(fam.values, dtype=complex),
            np.array(fam.jacobian, dtype=complex),
            np.array(ds, dtype=complex),
        )

    def _row_coupling(self):
        rows = []
        for j, r in enumerate(self.spec.ranks):
            rows.extend([self.target.coupling[j]] * r)
        return rows


@dataclass(frozen=True)
class ComplexArc:
    """
    Quadratic Bezier from 0 to 1 with one control point.

    The default control 0.5 is the straight segment.
    """
    control: complex = 0.5

    def point(self, tau: float) -> complex:
        return 2.0 * tau * (1.0 - tau) * self.control + tau * tau

    def derivative(self, tau: float) -> complex:
        return 2.0 * (1.0 - 2.0 * tau) * self.control + 2.0 * tau

    @classmethod
    def randomized(cls, rng: np.random.Generator, bow: float = 0.3) -> "ComplexArc":
        """Arc bending through 1 + bow*i*u with u uniform in [0.5, 1.5]."""
        u = rng.uniform(0.5, 1.5)
        return cls(complex(1.0, bow * u))


def _correct(family, z: np.ndarray, t: complex, opts: SolverSettings) -> Optional[np.ndarray]:
    """Newton corrector at fixed t; None when it does not contract fast enough."""
    previous = None
    for iteration in range(opts.corrector_iterations):
        values, jac, _ = family.evaluate(z, t)
        try:
            delta = np.linalg.solve(jac, -values)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta)):
            return None
        z = z + delta
        step = float(np.max(np.abs(delta)))
        scale = 1.0 + float(np.max(np.abs(z)))
        if iteration == 0 and step > 0.1 * scale:
            return None
        if step <= opts.track_tolerance * scale:
            return z
        if previous is not None and step > 0.5 * previous:
            return None
        previous = step
    return None


def newton_polish(
    system: BetheSystem,
    z: np.ndarray,
    tolerance: float,
    iterations: int,
) -> np.ndarray:
    """Newton iterations on the target system until the residual stops improving."""
    best, best_residual = z, float(np.max(np.abs(system.eval_system(z))))
    for _ in range(iterations):
        if best_residual < 1e-3 * tolerance:
            break
        try:
            delta = np.linalg.solve(system.eval_jacobian(best), -system.eval_system(best))
        except np.linalg.LinAlgError:
            break
        candidate = best + delta
        residual = float(np.max(np.abs(system.eval_system(candidate))))
        if not np.isfinite(residual) or residual >= best_residual:
            break
        best, best_residual = candidate, residual
    return best


def polish_extended(system: BetheSystem, sol: BetheSolution, opts: Optional[SolverSettings] = None) -> BetheSolution:
    """
    Re-polish an accepted solution with Newton in extended precision.

    The returned solution carries ``z_extended`` and its extended residual.
    """
    opts = opts or settings.solver
    z = list(sol.values())
    scale = 1.0 + max(abs(complex(v)) for v in z)
    for _ in range(opts.extended_polish_iterations):
        z, update = system.newton_step_extended(z)
        if update <= 1e-34 * scale:
            break
    return make_solution(system, z, opts.separation_factor, extended_values=z)


def track_path(
    family,
    start: Sequence[complex],
    arc: Optional[ComplexArc] = None,
    options: Optional[SolverSettings] = None,
    precision: Precision = Precision.F64,
    attempt: int = 0,
) -> HomotopyPath:
    """
    Track one start point from t = 0 to t = 1.

    Explicit Euler predictor on dz/dt = -H_z^{-1} H_t, Newton corrector at each
    node, step halved on corrector failure and grown after a run of successes.

    Args:
        family: DegenerationFamily or EquivariantFamily
        start: Solution of the t = 0 member
        arc: Path of t in the complex plane (straight segment by default)
        options: Solver settings
        precision: dd adds an extended-precision endpoint polish
        attempt: Retry counter recorded on the path

    Returns:
        HomotopyPath with status and, when converged, the endpoint
    """
    opts = options or settings.solver
    arc = arc or ComplexArc()
    start_t = tuple(complex(v) for v in start)
    z = np.array(start_t, dtype=complex)

    tau, h = 0.0, opts.initial_step
    steps = failures = streak = 0

    def stopped(status: PathStatus) -> HomotopyPath:
        return HomotopyPath(start_t, None, steps, failures, status, attempt)

    while tau < 1.0:
        if steps >= opts.max_steps:
            return stopped(PathStatus.STEP_LIMIT_EXCEEDED)
        steps += 1

        tau_next = 1.0 if h >= 1.0 - tau else tau + h
        corrected = None
        _, jac, h_t = family.evaluate(z, arc.point(tau))
        try:
            velocity = -np.linalg.solve(jac, h_t * arc.derivative(tau))
        except np.linalg.LinAlgError:
            velocity = None
        if velocity is not None and np.all(np.isfinite(velocity)):
            predicted = z + (tau_next - tau) * velocity
            corrected = _correct(family, predicted, arc.point(tau_next), opts)

        if corrected is not None:
            tau, z = tau_next, corrected
            streak += 1
            if streak >= opts.growth_after:
                h = min(h * opts.step_growth, opts.max_step)
                streak = 0
            if float(np.max(np.abs(z))) > opts.divergence_radius:
                logger.debug(f"Path diverged at tau={tau:.3e} after {steps} steps")
                return stopped(PathStatus.DIVERGED)
        else:
            failures += 1
            streak = 0
            h *= 0.5
            if h < opts.min_step:
                separation = family.target.min_separation(z)
                scale = 1.0 + float(np.max(np.abs(z)))
                if separation <= opts.separation_factor * scale:
                    return stopped(PathStatus.COLLIDED_WITH_DELTA)
                return stopped(PathStatus.DIVERGED)

    target = family.target
    tol_resid = opts.residual_factor * target.residual_tolerance_scale
    z = newton_polish(target, z, tol_resid, opts.polish_iterations)
    if not np.all(np.isfinite(z)):
        return stopped(PathStatus.DIVERGED)

    end = make_solution(target, z, opts.separation_factor)
    if end.min_separation <= end.separation_tolerance:
        status = PathStatus.COLLIDED_WITH_DELTA
    elif end.residual_norm >= tol_resid:
        status = PathStatus.STEP_LIMIT_EXCEEDED
    else:
        status = PathStatus.CONVERGED
        if precision == Precision.DD:
            end = polish_extended(target, end, opts)

    return HomotopyPath(start_t, end, steps, failures, status, attempt)
