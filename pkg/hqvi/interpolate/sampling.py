"""
Seeded parameter samples on per-coordinate circles.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from hqvi.config import FitSettings, get_logger, settings
from hqvi.models import Multidegree, ProblemSpec

logger = get_logger("interpolate.sampling")


def monomial_spread(radii: Sequence[float], support: Sequence[Multidegree]) -> float:
    """Ratio of the largest to the smallest |q^d| over the support."""
    if not support:
        return 1.0
    logs = [sum(d_j * math.log(r) for d_j, r in zip(d, radii)) for d in support]
    return math.exp(max(logs) - min(logs))


def sampling_radii(
    spec: ProblemSpec,
    support: Optional[Sequence[Multidegree]] = None,
    options: Optional[FitSettings] = None,
) -> List[float]:
    """
    Radii log-spaced in [radius_min, radius_max], distinct per coordinate.

    When the support is known the radii are pulled toward 1 until the monomial
    spread is below the configured limit.
    """
    opts = options or settings.fit
    k = spec.k
    if k == 1:
        radii = [math.sqrt(opts.radius_min * opts.radius_max)]
    else:
        ratio = opts.radius_max / opts.radius_min
        radii = [opts.radius_min * ratio ** (j / (k - 1)) for j in range(k)]

    if support:
        spread = monomial_spread(radii, support)
        if spread > opts.spread_limit:
            alpha = 0.9 * math.log(opts.spread_limit) / math.log(spread)
            radii = [r ** alpha for r in radii]
            logger.debug(f"Contracted sampling radii by exponent {alpha:.3f} (spread was {spread:.2e})")
    return radii


def sample_parameters(
    spec: ProblemSpec,
    count: int,
    seed: Union[int, Sequence[int]],
    support: Optional[Sequence[Multidegree]] = None,
    options: Optional[FitSettings] = None,
) -> List[Tuple[complex, ...]]:
    """
    q_j = R_j exp(2 pi i u) with u uniform per coordinate; deterministic in seed.

    Args:
        spec: Problem instance
        count: Number of samples
        seed: Seed of the phase generator
        support: Degree support used for radius control
        options: Fit settings

    Returns:
        List of parameter vectors of length k
    """
    radii = sampling_radii(spec, support, options)
    rng = np.random.default_rng(seed)
    phases = rng.random((count, spec.k))
    return [
        tuple(complex(r * np.exp(2j * np.pi * u)) for r, u in zip(radii, row))
        for row in phases
    ]
