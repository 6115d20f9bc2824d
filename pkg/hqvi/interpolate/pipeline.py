"""
End-to-end pipeline: support, samples, solve and evaluate per sample, fit.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from hqvi.config import (
    FitSettings,
    Method,
    Precision,
    SolverSettings,
    get_logger,
    settings,
)
from hqvi.core import (
    degree_support,
    reduce_bundle_degree,
    uses_chain_bound,
    validate_insertion,
    validate_spec,
)
from hqvi.errors import (
    DegenerateSolution,
    HQVIError,
    IncompleteSolutionSet,
    InputError,
    JNearZero,
    MethodMismatch,
    ResidualTooLarge,
    RoundingUnsafe,
)
from hqvi.evaluator import eval_point, eval_point_limit
from hqvi.models import GeneratingPolynomial, Insertion, PointValue, ProblemSpec, SolutionSet
from hqvi.solver import refine_solution_set, solve
from hqvi.utils import derive_seed, format_duration
from .fit import fit_polynomial
from .sampling import sample_parameters

logger = get_logger("interpolate")

RESAMPLE_ERRORS = (IncompleteSolutionSet, JNearZero, DegenerateSolution)


@dataclass
class ComputeOptions:
    """Per-run knobs; unset fields fall back to the global settings."""
    method: Method = Method.DEGENERATION
    precision: Optional[Precision] = None
    seed: Optional[int] = None
    samples: Optional[int] = None
    max_degree: Optional[int] = None
    retries: Optional[int] = None
    threads: Optional[int] = None
    eps_direction: Optional[Sequence[complex]] = None
    solver: SolverSettings = field(default_factory=lambda: settings.solver)
    fit: FitSettings = field(default_factory=lambda: settings.fit)

    @property
    def resolved_seed(self) -> int:
        return self.seed if self.seed is not None else settings.default_seed

    @property
    def resolved_precision(self) -> Precision:
        return self.precision or settings.precision

    @property
    def resolved_retries(self) -> int:
        return self.retries if self.retries is not None else self.fit.retries

    @property
    def resolved_threads(self) -> int:
        threads = self.threads or settings.threads or os.cpu_count() or 1
        return max(1, threads)


def seeded_eps_direction(spec: ProblemSpec, seed: int, norm: float) -> Tuple[complex, ...]:
    """Seeded epsilon direction with the given norm and distinct entries."""
    rng = np.random.default_rng(derive_seed(seed, 0xE95))
    raw = rng.normal(size=spec.ambient_rank) + 1j * rng.normal(size=spec.ambient_rank)
    raw = raw / np.linalg.norm(raw) * norm
    return tuple(complex(x) for x in raw)


class _SampleRunner:
    """Evaluates the formula at sample points, resampling non-generic ones."""

    def __init__(
        self,
        spec: ProblemSpec,
        insertion: Insertion,
        support: Sequence[Tuple[int, ...]],
        opts: ComputeOptions,
        eps_direction: Optional[Tuple[complex, ...]],
    ) -> None:
        self.spec = spec
        self.insertion = insertion
        self.support = support
        self.opts = opts
        self.eps_direction = eps_direction
        self.cache: Dict[Tuple[int, int], Tuple[Tuple[complex, ...], SolutionSet]] = {}
        self.resamples = 0

    def run(self, attempt: int, index: int, q: Tuple[complex, ...], precision: Precision):
        seed = self.opts.resolved_seed
        last_error: Optional[HQVIError] = None
        for retry in range(self.opts.resolved_retries + 1):
            if retry:
                self.resamples += 1
                q = sample_parameters(
                    self.spec, 1, derive_seed(seed, attempt, index, retry, 1), self.support, self.opts.fit
                )[0]
            try:
                return self._evaluate(attempt, index, retry, q, precision)
            except RESAMPLE_ERRORS as exc:
                last_error = exc
                logger.warning(f"Sample {index} at q={q} is not generic ({exc.code}); resampling")
        raise last_error

    def _evaluate(self, attempt: int, index: int, retry: int, q, precision: Precision):
        seed = self.opts.resolved_seed
        path_seed = derive_seed(seed, attempt, index, retry)
        if self.eps_direction is not None:
            point = eval_point_limit(
                self.spec, self.insertion, q, self.eps_direction,
                options=self.opts.solver, seed=path_seed, precision=precision,
            )
            return q, point, None

        cached = self.cache.get((attempt, index))
        if cached is not None and cached[0] == q and precision == Precision.DD:
            sols = refine_solution_set(cached[1], self.opts.solver)
        else:
            sols = solve(self.spec, q, method=Method.DEGENERATION, options=self.opts.solver,
                         seed=path_seed, precision=precision)
        if precision == Precision.F64:
            self.cache[(attempt, index)] = (q, sols)
        return q, eval_point(self.spec, self.insertion, sols, self.opts.fit), sols


def compute(
    spec: ProblemSpec,
    insertion: Insertion,
    options: Optional[ComputeOptions] = None,
) -> GeneratingPolynomial:
    """
    Recover the generating polynomial of virtual intersection numbers.

    Negative bundle degrees are reduced to zero first; the result is then a
    Laurent polynomial shifted by the bundle degree.

    Args:
        spec: Problem instance
        insertion: Homogeneous insertion
        options: Run options

    Returns:
        GeneratingPolynomial with diagnostics in its metadata
    """
    opts = options or ComputeOptions()
    started = time.perf_counter()
    spec = validate_spec(spec)
    validate_insertion(spec, insertion)
    base_spec, base_insertion, shift = reduce_bundle_degree(spec, insertion)
    support = degree_support(base_spec, base_insertion, opts.max_degree)

    seed = opts.resolved_seed
    metadata: Dict[str, Any] = {
        "spec": spec.to_dict(),
        "spec_hash": spec.fingerprint(),
        "insertion": insertion.to_string(),
        "insertion_hash": insertion.fingerprint(),
    }
    diagnostics: Dict[str, Any] = {
        "method": opts.method.value,
        "seed": seed,
        "support_size": len(support),
        "chain_bound_used": uses_chain_bound(base_spec, opts.max_degree),
        "bundle_degree_shift": shift,
    }

    if not support:
        logger.info(f"Empty degree support for {insertion}; returning the zero polynomial")
        diagnostics.update({"precision_used": None, "samples_used": 0, "paths_tracked": 0})
        metadata["diagnostics"] = diagnostics
        return GeneratingPolynomial(spec.k, {}, metadata)

    eps_direction = None
    if opts.method == Method.EQUIVARIANT:
        if spec.is_equivariant:
            eps_direction = spec.eps
        else:
            eps_direction = opts.eps_direction or seeded_eps_direction(spec, seed, settings.equivariant.direction_norm)
        base_spec = base_spec.replace(equivariant_params=())
    elif spec.is_equivariant:
        raise MethodMismatch("compute with the degeneration method needs epsilon = 0")

    fit_opts = opts.fit
    minimum = len(support) + fit_opts.holdout
    count = opts.samples or len(support) + fit_opts.oversample + fit_opts.holdout
    if count < minimum:
        raise InputError(
            f"--samples {count} is below the minimum {minimum} for {len(support)} degrees",
            {"samples": count, "minimum": minimum},
        )

    start_precision = opts.resolved_precision
    ladder = [start_precision]
    if start_precision == Precision.F64 and fit_opts.auto_escalate:
        ladder.append(Precision.DD)

    runner = _SampleRunner(base_spec, base_insertion, support, opts, eps_direction)
    threads = opts.resolved_threads
    last_error: Optional[HQVIError] = None
    polynomial: Optional[GeneratingPolynomial] = None
    solution_sets: List[SolutionSet] = []
    attempts_made = 0

    for precision in ladder:
        escalate_next = precision != ladder[-1]
        attempts = 1 if escalate_next else opts.resolved_retries + 1
        for attempt in range(attempts):
            attempts_made += 1
            qs = sample_parameters(base_spec, count, derive_seed(seed, attempt), support, fit_opts)
            jobs = list(enumerate(qs))
            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    results = list(pool.map(lambda job: runner.run(attempt, job[0], job[1], precision), jobs))
            else:
                results = [runner.run(attempt, i, q, precision) for i, q in jobs]

            samples = [(q, point) for q, point, _ in results]
            solution_sets = [sols for _, _, sols in results if sols is not None]
            try:
                polynomial = fit_polynomial(base_spec, base_insertion, support, samples, fit_opts, precision)
                diagnostics["precision_used"] = precision.value
                break
            except (RoundingUnsafe, ResidualTooLarge) as exc:
                last_error = exc
                next_step = "escalating to dd" if escalate_next else "reseeding"
                logger.warning(f"Fit failed in {precision.value} ({exc.code}): {exc.message}; {next_step}")
        if polynomial is not None:
            break

    if polynomial is None:
        raise last_error

    diagnostics.update({
        "samples_used": count,
        "attempts": attempts_made,
        "sample_resamples": runner.resamples,
        "paths_tracked": sum(s.diagnostics.get("paths_tracked", 0) for s in solution_sets),
        "path_failures": sum(s.diagnostics.get("path_failures", 0) for s in solution_sets),
        "worst_residual": max((s.diagnostics.get("worst_residual", 0.0) for s in solution_sets), default=0.0),
        "worst_condition": max((s.diagnostics.get("worst_condition", 0.0) for s in solution_sets), default=0.0),
        "near_degenerate": sum(s.diagnostics.get("near_degenerate", 0) for s in solution_sets),
    })

    if shift:
        polynomial = polynomial.shift((-shift,) * spec.k)
    metadata.update(polynomial.metadata)
    metadata["diagnostics"] = diagnostics
    polynomial.metadata = metadata

    logger.info(
        f"✅ Recovered {len(polynomial.coeffs)} coefficient(s) for g={spec.genus} ranks={list(spec.ranks)} "
        f"n={spec.ambient_rank} insertion {insertion} in {format_duration(time.perf_counter() - started)}"
    )
    return polynomial
