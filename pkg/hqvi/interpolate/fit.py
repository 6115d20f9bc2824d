"""
Least-squares recovery of integer coefficients from point values.
"""

from __future__ import annotations

import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from hqvi.config import FitSettings, Precision, get_logger, settings
from hqvi.errors import InputError, ResidualTooLarge, RoundingUnsafe
from hqvi.models import GeneratingPolynomial, Insertion, Multidegree, PointValue, ProblemSpec
from hqvi.system import extended, to_extended
from hqvi.system.precision import extended_lstsq

logger = get_logger("interpolate.fit")

Sample = Tuple[Sequence[complex], PointValue]


def _column_scales(samples: Sequence[Sample], k: int) -> List[float]:
    """Geometric mean of |q_j| over the samples."""
    return [
        math.exp(sum(math.log(abs(q[j])) for q, _ in samples) / len(samples))
        for j in range(k)
    ]


def _monomial(q: Sequence[Any], d: Multidegree) -> Any:
    value: Any = 1
    for qj, dj in zip(q, d):
        value = value * qj ** dj
    return value


def fit_polynomial(
    spec: ProblemSpec,
    insertion: Insertion,
    support: Sequence[Multidegree],
    samples: Sequence[Sample],
    options: Optional[FitSettings] = None,
    precision: Optional[Precision] = None,
) -> GeneratingPolynomial:
    """
    Fit sum_d c_d q^d to the samples and round to integers.

    The last ``holdout`` samples are kept out of the fit and used to verify the
    rounded polynomial.

    Raises:
        RoundingUnsafe: a coefficient is not close to an integer.
        ResidualTooLarge: the rounded polynomial misses a held-out value.
    """
    opts = options or settings.fit
    k = spec.k
    if len(samples) < len(support) + opts.holdout:
        raise InputError(
            f"Need at least {len(support) + opts.holdout} samples for {len(support)} degrees, got {len(samples)}",
            {"samples": len(samples), "support": len(support)},
        )
    if not support:
        return GeneratingPolynomial.zero(k)

    fit_rows = list(samples[:len(samples) - opts.holdout])
    held_out = list(samples[len(samples) - opts.holdout:])
    scales = _column_scales(fit_rows, k)
    column_scale = [_monomial(scales, d) for d in support]
    use_extended = precision == Precision.DD or any(pv.extended_value is not None for _, pv in samples)

    if use_extended:
        rows = []
        for q, _ in fit_rows:
            scaled = [qe / s for qe, s in zip(to_extended(q), scales)]
            rows.append([_monomial(scaled, d) for d in support])
        rhs = [extended.convert(pv.best_value()) for _, pv in fit_rows]
        solution = extended_lstsq(rows, rhs)
        raw = [complex(x / s) for x, s in zip(solution, column_scale)]
    else:
        matrix = np.array(
            [[_monomial([qj / s for qj, s in zip(q, scales)], d) for d in support] for q, _ in fit_rows],
            dtype=complex,
        )
        rhs = np.array([pv.value for _, pv in fit_rows], dtype=complex)
        solution, *_ = np.linalg.lstsq(matrix, rhs, rcond=None)
        raw = [complex(x) / s for x, s in zip(solution, column_scale)]

    coeffs: Dict[Multidegree, int] = {}
    failures = []
    worst_distance = 0.0
    for d, c in zip(support, raw):
        nearest = round(c.real)
        distance = abs(c - nearest)
        worst_distance = max(worst_distance, distance / (1.0 + abs(c)))
        if distance >= opts.rounding_gate * (1.0 + abs(c)):
            failures.append({"degree": list(d), "value": [c.real, c.imag], "distance": distance})
        elif nearest:
            coeffs[tuple(d)] = int(nearest)
    if failures:
        raise RoundingUnsafe(
            f"{len(failures)} coefficient(s) fail the rounding gate (first at {failures[0]['degree']})",
            {"failures": failures[:5]},
        )

    polynomial = GeneratingPolynomial(k, coeffs)
    worst_residual = 0.0
    for q, pv in held_out:
        if use_extended:
            predicted = polynomial.evaluate(to_extended(q))
            observed = extended.convert(pv.best_value())
        else:
            predicted = polynomial.evaluate(q)
            observed = pv.value
        term_scale = sum(abs(c) * abs(_monomial(q, d)) for d, c in polynomial.coeffs.items())
        scale = max(abs(complex(observed)), pv.magnitude, term_scale, 1e-300)
        relative = float(abs(observed - predicted)) / scale
        worst_residual = max(worst_residual, relative)
    if worst_residual >= opts.residual_gate:
        raise ResidualTooLarge(
            f"Held-out relative residual {worst_residual:.3e} exceeds {opts.residual_gate:.1e}",
            {"residual": worst_residual},
        )

    negatives = [list(d) for d, c in polynomial.coeffs.items() if c < 0]
    if negatives:
        logger.warning(f"⚠️ Negative coefficients at degrees {negatives} for insertion {insertion}")
    polynomial.metadata = {
        "fit": {
            "samples": len(fit_rows),
            "held_out": len(held_out),
            "worst_rounding_distance": worst_distance,
            "heldout_residual": worst_residual,
            "extended": use_extended,
        },
        "negative_coefficients": negatives,
    }
    return polynomial
