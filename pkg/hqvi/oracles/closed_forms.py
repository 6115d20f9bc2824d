"""
Closed-form reference values for special rank chains.

Exact integer arithmetic is used wherever the formula allows it; only the
single-level sum needs numeric root finding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from hqvi.config import get_logger
from hqvi.core import relative_virtual_dimensions, virtual_dimension
from hqvi.errors import (
    BundleDegreePositive,
    HypothesisNotMet,
    InputError,
    RootsDegenerate,
    RoundingUnsafe,
)
from hqvi.evaluator import elementary_symmetric
from hqvi.models import (
    ElemSym,
    GeneratingPolynomial,
    Insertion,
    ProblemSpec,
)

logger = get_logger("oracles")

# Unit-modulus parameters for reading off a single-degree coefficient
UNIT_PARAMETERS = (cmath.exp(0.7j), cmath.exp(-2.1j))
ROUNDING_GATE = 1e-6


def _padded(m: Sequence[int], length: int) -> List[int]:
    exps = [int(x) for x in m]
    if len(exps) > length:
        if any(exps[length:]):
            raise InputError(f"Exponent vector {list(m)} is longer than the rank {length}")
        exps = exps[:length]
    if any(x < 0 for x in exps):
        raise InputError(f"Exponents must be non-negative, got {list(m)}")
    return exps + [0] * (length - len(exps))


def _polished_roots(coeffs: np.ndarray, iterations: int = 4) -> np.ndarray:
    """Companion-matrix roots followed by a few Newton steps each."""
    roots = np.roots(coeffs)
    deriv = np.polyder(coeffs)
    for _ in range(iterations):
        slope = np.polyval(deriv, roots)
        safe = np.abs(slope) > 0
        roots = np.where(safe, roots - np.polyval(coeffs, roots) / np.where(safe, slope, 1), roots)
    return roots


def oracle_quot_k1(
    g: int,
    n: int,
    r: int,
    m: Sequence[int],
    q: complex,
    eps: Optional[Sequence[complex]] = None,
) -> complex:
    """
    Single-level sum over r-subsets of the roots of prod(X - eps) + (-1)^r q.

    Args:
        g: Genus
        n: Ambient rank
        r: Subbundle rank
        m: Exponents of e_1..e_r
        q: Quantum parameter
        eps: Equivariant weights, all zero when omitted

    Returns:
        Sum of prod e_i^{m_i} J^{g-1} over the subsets
    """
    if not 1 <= r <= n:
        raise InputError(f"Rank {r} must lie in [1, {n}]")
    exps = _padded(m, r)
    weights = np.zeros(n, dtype=complex) if eps is None else np.asarray(eps, dtype=complex)
    if weights.shape != (n,):
        raise InputError(f"Expected {n} equivariant weights, got {len(weights)}")

    base = np.poly(weights)
    coeffs = np.array(base, dtype=complex)
    coeffs[-1] += (-1) ** r * q
    roots = _polished_roots(coeffs)

    scale = max(1.0, float(np.max(np.abs(roots))))
    gaps = [abs(a - b) for a, b in combinations(roots, 2)]
    if gaps and min(gaps) < 1e-8 * scale:
        raise RootsDegenerate(
            f"Repeated roots at q={q}: minimum gap {min(gaps):.2e}",
            {"q": [q.real, q.imag], "min_gap": min(gaps)},
        )

    base_deriv = np.polyder(base)
    total = 0j
    for subset in combinations(range(n), r):
        zeta = [complex(roots[i]) for i in subset]
        numerator = math.prod(complex(np.polyval(base_deriv, z)) for z in zeta)
        vandermonde = math.prod(
            zeta[i] - zeta[t] for i in range(r) for t in range(r) if i != t
        )
        J = numerator / vandermonde
        elem = elementary_symmetric(zeta)
        term = math.prod(elem[i + 1] ** exps[i] for i in range(r))
        total += term * J ** (g - 1)
    return total


def quot_k1_degree(g: int, n: int, r: int, m: Sequence[int], e: int = 0) -> Optional[int]:
    """The only degree where the single-level series can be nonzero, if any."""
    insertion_degree = sum((i + 1) * x for i, x in enumerate(_padded(m, r)))
    spec = ProblemSpec(genus=g, ambient_rank=n, ranks=(r,), bundle_degree=e)
    offset = insertion_degree - virtual_dimension(spec, (0,))
    if offset % n:
        return None
    return offset // n


def oracle_quot_k1_coefficient(
    g: int,
    n: int,
    r: int,
    m: Sequence[int],
    e: int = 0,
) -> Tuple[Optional[int], int]:
    """
    Integer coefficient of the single-level generating function.

    Non-positive bundle degrees are moved to zero by an elementary
    modification, which multiplies by e_r^{|e|} and shifts the degree.

    Returns:
        (degree, coefficient); degree is None when no degree matches
    """
    if e > 0:
        raise BundleDegreePositive(f"Bundle degree {e} must be non-positive", {"bundle_degree": e})
    exps = _padded(m, r)
    exps[r - 1] += -e
    d = quot_k1_degree(g, n, r, exps)
    if d is None or d < 0:
        return None, 0

    values = [oracle_quot_k1(g, n, r, exps, q) / q ** d for q in UNIT_PARAMETERS]
    coefficient = round(values[0].real)
    spread = max(abs(v - coefficient) for v in values)
    if spread > ROUNDING_GATE * max(1.0, abs(coefficient)):
        raise RoundingUnsafe(
            f"Single-level value {values[0]} is not an integer (distance {spread:.2e})",
            {"values": [[v.real, v.imag] for v in values]},
        )
    return d + e, int(coefficient)


def oracle_quot_k1_polynomial(g: int, n: int, r: int, m: Sequence[int], e: int = 0) -> GeneratingPolynomial:
    d, c = oracle_quot_k1_coefficient(g, n, r, m, e)
    if d is None or not c:
        return GeneratingPolynomial.zero(1)
    return GeneratingPolynomial.monomial((d,), c)


def _alpha(j: int, k: int) -> GeneratingPolynomial:
    """q_1...q_j (1 + q_{j+1} + q_{j+1} q_{j+2} + ... + q_{j+1}...q_k)."""
    tail = GeneratingPolynomial.zero(k)
    for last in range(j, k + 1):
        tail = tail + GeneratingPolynomial.monomial(
            tuple(1 if j < idx <= last else 0 for idx in range(1, k + 1))
        )
    head = GeneratingPolynomial.monomial(tuple(1 if idx <= j else 0 for idx in range(1, k + 1)))
    return head * tail


def oracle_points(n: int, k: int, exponents: Mapping[Tuple[int, int], int]) -> GeneratingPolynomial:
    """
    Punctual chains r = (n, ..., n): prod_j alpha_j^{m_{n,j}}.

    Args:
        n: Ambient rank, also every level rank
        k: Number of levels
        exponents: Map (i, j) -> exponent of c_i at level j

    Returns:
        The generating polynomial; zero when a sub-top class appears
    """
    result = GeneratingPolynomial.one(k)
    for (i, j), power in sorted(exponents.items()):
        if not 1 <= j <= k or not 1 <= i <= n:
            raise InputError(f"Class c{i}[{j}] is out of range for n={n}, k={k}")
        if power == 0:
            continue
        if i < n:
            return GeneratingPolynomial.zero(k)
        result = result * _alpha(j, k) ** power
    return result


def points_insertion(exponents: Mapping[Tuple[int, int], int]) -> Insertion:
    return Insertion.from_powers({ElemSym(i, j): p for (i, j), p in exponents.items()})


def segre_class(rank: int, j: int, a: int) -> Insertion:
    """
    Degree-a Segre class of E_j in the level-j classes.

    With c_i[j] the Chern classes of the dual, s_t(E_j) = 1 / (1 - c_1 t + c_2 t^2 - ...)
    and its degree-a part is h_a = sum_i (-1)^{i+1} c_i[j] h_{a-i}.
    """
    if a < 0:
        raise InputError(f"Segre degree must be non-negative, got {a}")
    classes = [Insertion.one()]
    for step in range(1, a + 1):
        h = Insertion(())
        for i in range(1, min(step, rank) + 1):
            h = h + classes[step - i] * Insertion.monomial(ElemSym(i, j), coefficient=(-1) ** (i + 1))
        classes.append(h)
    return classes[a]


def segre_insertion(n: int, degrees: Sequence[int]) -> Insertion:
    """prod_j s_{a_j}(E_j) for the punctual chain (n, ..., n)."""
    result = Insertion.one()
    for j, a in enumerate(degrees, start=1):
        result = result * segre_class(n, j, int(a))
    return result


def oracle_points_segre(n: int, k: int, degrees: Sequence[int]) -> GeneratingPolynomial:
    """
    Coefficient of prod_j t_j^{a_j} in prod_j 1 / (1 - (-1)^{n+1} t_j^n alpha_j).

    Only the pure top class survives in s_{pn}(E_j), with sign (-1)^{(n+1)p};
    any a_j not divisible by n gives zero.
    """
    if len(degrees) != k:
        raise InputError(f"Expected {k} Segre degrees, got {len(degrees)}")
    result = GeneratingPolynomial.one(k)
    for j, a in enumerate(degrees, start=1):
        if a < 0:
            raise InputError(f"Segre degree must be non-negative, got {a}")
        if a % n:
            return GeneratingPolynomial.zero(k)
        power = a // n
        if power == 0:
            continue
        sign = (-1) ** ((n + 1) * power)
        result = result * _alpha(j, k) ** power * sign
    return result


def two_step_insertion(n: int, ell: int, m: Sequence[int]) -> Insertion:
    """c_1[1]^ell * prod_i c_i[2]^{m_i} for the chain (1, n-1)."""
    powers: Dict[ElemSym, int] = {ElemSym(1, 1): ell}
    for i, power in enumerate(_padded(m, n - 1), start=1):
        powers[ElemSym(i, 2)] = power
    return Insertion.from_powers(powers)


def two_step_degree(g: int, n: int, ell: int, m: Sequence[int]) -> Optional[int]:
    weight = ell + sum(i * x for i, x in enumerate(_padded(m, n - 1), start=1))
    numerator = weight + (2 * n - 3) * (g - 1)
    if numerator < 0 or numerator % (n - 1):
        return None
    return numerator // (n - 1)


def oracle_two_step(g: int, n: int, ell: int, m: Sequence[int]) -> GeneratingPolynomial:
    """
    Binomial closed form for the chain (1, n-1) in rank n.

    Out-of-range binomials and negative exponents contribute nothing.
    """
    if n < 3:
        raise InputError(f"The chain (1, n-1) needs n >= 3, got n={n}")
    exps = _padded(m, n - 1)
    d = two_step_degree(g, n, ell, exps)
    if d is None:
        return GeneratingPolynomial.zero(2)

    gbar = g - 1
    top = d - gbar - exps[-1]
    if top < 0:
        return GeneratingPolynomial.zero(2)
    factor = n ** g * (n - 1) ** g
    coeffs: Dict[Tuple[int, int], int] = {}
    # bottom index jn - ell - m_{n-1} + gbar runs over [0, top]
    shift = ell + exps[-1] - gbar
    j_min = -((-shift) // n)
    j_max = (top + shift) // n
    for j in range(j_min, j_max + 1):
        bottom = j * n - shift
        if not 0 <= bottom <= top:
            continue
        a, b = gbar + j, d - gbar - j
        if a < 0 or b < 0:
            continue
        coeffs[(a, b)] = coeffs.get((a, b), 0) + factor * math.comb(top, bottom)
    return GeneratingPolynomial(2, coeffs)


def two_step_solutions(n: int, q: Sequence[complex]) -> List[Tuple[Tuple[complex, ...], complex]]:
    """
    Explicit orbit representatives for the chain (1, n-1).

    Returns:
        List of (z, J) with z = (zeta, eta_1, ..., eta_{n-1})
    """
    q1, q2 = complex(q[0]), complex(q[1])
    if q1 == 0 or q2 == 0:
        raise InputError("Both parameters must be nonzero")
    solutions: List[Tuple[Tuple[complex, ...], complex]] = []
    ratio = q1 / q2
    for a in range(n):
        w = abs(ratio) ** (1 / n) * cmath.exp(1j * (cmath.phase(ratio) + 2 * math.pi * a) / n)
        target = q1 * (1 + 1 / w)
        for b in range(n - 1):
            zeta = abs(target) ** (1 / (n - 1)) * cmath.exp(
                1j * (cmath.phase(target) + 2 * math.pi * b) / (n - 1)
            )
            ratio_zw = -zeta / w
            coeffs = np.array([ratio_zw ** p for p in range(n)], dtype=complex)
            coeffs[-1] += (-1) ** n * q2
            eta = tuple(complex(x) for x in _polished_roots(coeffs))
            J = n * (n - 1) * q2 * w * zeta ** (n - 2)
            solutions.append(((zeta,) + eta, J))
    return solutions


@dataclass
class MaximalSubsheafFactor:
    """Split of a vanishing-last-step degree into a count times a smaller problem."""
    factor: int
    reduced_spec: ProblemSpec
    reduced_degree: Tuple[int, ...]
    reduced_insertion: Insertion

    def to_dict(self) -> dict:
        return {
            "factor": str(self.factor),
            "reduced_spec": self.reduced_spec.to_dict(),
            "reduced_degree": list(self.reduced_degree),
            "reduced_insertion": self.reduced_insertion.to_string(),
        }


def maximal_subsheaf_count(n: int, e: int, r: int, g: int) -> int:
    """Number of maximal-slope rank-r subbundles of a general stable bundle."""
    if g < 2:
        raise HypothesisNotMet(f"Stable bundles are only guaranteed for g >= 2, got g={g}", {"genus": g})
    if e > 0:
        raise HypothesisNotMet(f"Bundle degree {e} must be non-positive", {"bundle_degree": e})
    d, count = oracle_quot_k1_coefficient(g, n, r, (), e)
    if d is None:
        raise HypothesisNotMet(
            f"No degree gives virtual dimension 0 for n={n}, e={e}, r={r}, g={g}",
            {"n": n, "e": e, "r": r, "genus": g},
        )
    return count


def oracle_maximal_subsheaf_factor(
    spec: ProblemSpec,
    insertion: Insertion,
    d: Sequence[int],
) -> MaximalSubsheafFactor:
    """
    Factor a coefficient whose last step has virtual dimension 0.

    The coefficient at d equals m(n, e, r_k, g) times the coefficient at
    (d_j - d_k) of the chain (r_1..r_{k-1}) in a rank r_k bundle of degree
    e - d_k.
    """
    d = tuple(int(x) for x in d)
    if spec.genus < 2:
        raise HypothesisNotMet(f"Needs genus >= 2, got {spec.genus}", {"genus": spec.genus})
    if spec.bundle_degree > 0:
        raise HypothesisNotMet(f"Bundle degree {spec.bundle_degree} must be non-positive")
    if spec.k < 2:
        raise InputError("Factoring needs at least two levels", {"ranks": list(spec.ranks)})
    if len(d) != spec.k:
        raise InputError(f"Degree {list(d)} has length {len(d)}, expected {spec.k}")
    relative = relative_virtual_dimensions(spec, d)
    if relative[-1] != 0:
        raise HypothesisNotMet(
            f"Last step has virtual dimension {relative[-1]} at {list(d)}, not 0",
            {"relative_dimensions": relative},
        )
    for prim in insertion.primitives():
        top_level = prim.j if isinstance(prim, ElemSym) else prim.level + 1
        if top_level >= spec.k:
            raise HypothesisNotMet(
                f"Insertion {insertion} touches level {spec.k}",
                {"primitive": prim.to_string()},
            )

    factor = maximal_subsheaf_count(spec.ambient_rank, spec.bundle_degree, spec.rank(spec.k), spec.genus)
    reduced_spec = ProblemSpec(
        genus=spec.genus,
        ambient_rank=spec.rank(spec.k),
        ranks=spec.ranks[:-1],
        bundle_degree=spec.bundle_degree - d[-1],
    )
    reduced_degree = tuple(x - d[-1] for x in d[:-1])
    logger.debug(f"m({spec.ambient_rank},{spec.bundle_degree},{spec.rank(spec.k)},{spec.genus}) = {factor}")
    return MaximalSubsheafFactor(factor, reduced_spec, reduced_degree, insertion)
