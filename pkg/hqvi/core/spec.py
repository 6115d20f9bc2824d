"""
Validation, virtual dimension and degree-support arithmetic.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

from hqvi.config import get_logger
from hqvi.errors import (
    BundleDegreePositive,
    EquivariantParamsDegenerate,
    InputError,
    RankChainInvalid,
    UnboundedSupport,
)
from hqvi.models import ElemSym, Insertion, Multidegree, ProblemSpec

logger = get_logger("core")

ZERO_EPS_TOLERANCE = 1e-14
DISTINCT_EPS_TOLERANCE = 1e-10


def validate_spec(spec: ProblemSpec) -> ProblemSpec:
    """
    Check a ProblemSpec and return its normalized form.

    Epsilon vectors whose entries are all within 1e-14 of zero collapse to the
    non-equivariant (empty) form.

    Raises:
        RankChainInvalid: ranks empty, non-positive, decreasing, or above n.
        EquivariantParamsDegenerate: two epsilon within 1e-10 of each other.
        InputError: negative genus or wrong epsilon length.
    """
    if spec.genus < 0:
        raise InputError(f"Genus must be non-negative, got {spec.genus}", {"genus": spec.genus})
    if spec.ambient_rank < 1:
        raise RankChainInvalid(f"Ambient rank must be positive, got {spec.ambient_rank}")
    if spec.k < 1:
        raise RankChainInvalid("At least one rank is required")

    chain = (0,) + spec.ranks + (spec.ambient_rank,)
    if spec.ranks[0] < 1 or any(a > b for a, b in zip(chain[1:], chain[2:])):
        raise RankChainInvalid(
            f"Ranks {list(spec.ranks)} must satisfy 1 <= r_1 <= ... <= r_k <= n = {spec.ambient_rank}",
            {"ranks": list(spec.ranks), "ambient_rank": spec.ambient_rank},
        )

    eps = spec.equivariant_params
    if not eps:
        return spec
    if len(eps) != spec.ambient_rank:
        raise InputError(
            f"Expected {spec.ambient_rank} equivariant parameters, got {len(eps)}",
            {"eps_length": len(eps)},
        )
    if all(abs(e) <= ZERO_EPS_TOLERANCE for e in eps):
        return spec.replace(equivariant_params=())
    for a, b in combinations(range(len(eps)), 2):
        if abs(eps[a] - eps[b]) <= DISTINCT_EPS_TOLERANCE:
            raise EquivariantParamsDegenerate(
                f"Equivariant parameters {a + 1} and {b + 1} coincide",
                {"indices": [a + 1, b + 1]},
            )
    return spec


def virtual_dimension(spec: ProblemSpec, d: Sequence[int]) -> int:
    """(1-g) dim Fl + e (r_1 - n) + sum_i d_i rho_i."""
    base = (1 - spec.genus) * spec.flag_dimension + spec.bundle_degree * (spec.rank(1) - spec.ambient_rank)
    return base + sum(di * rho for di, rho in zip(d, spec.rho))


def relative_virtual_dimensions(spec: ProblemSpec, d: Sequence[int]) -> List[int]:
    """
    Relative virtual dimensions of the successive Quot steps.

    Entry j is ((1-g) r_j - e)(r_{j+1} - r_j) + r_{j+1} d_j - r_j d_{j+1} with
    d_{k+1} = 0; the entries sum to the virtual dimension.
    """
    g, e = spec.genus, spec.bundle_degree
    dd = list(d) + [0]
    return [
        ((1 - g) * spec.rank(j) - e) * (spec.rank(j + 1) - spec.rank(j))
        + spec.rank(j + 1) * dd[j - 1] - spec.rank(j) * dd[j]
        for j in range(1, spec.k + 1)
    ]


def uses_chain_bound(spec: ProblemSpec, cap: Optional[int] = None) -> bool:
    """True when some rho_i vanishes and the chain bound d_i <= d_{i-1} is applied."""
    return cap is None and any(rho == 0 for rho in spec.rho)


def degree_support(
    spec: ProblemSpec,
    insertion: Insertion,
    cap: Optional[int] = None,
) -> List[Multidegree]:
    """
    Enumerate the multidegrees whose virtual dimension equals the insertion degree.

    Args:
        spec: Problem instance
        insertion: Homogeneous insertion
        cap: Optional bound d_i <= cap replacing all other bounds

    Returns:
        Sorted lexicographic list of multidegrees
    """
    delta = insertion.degree(spec)
    if delta is None:
        return []

    rho = spec.rho
    if cap is None and rho[0] == 0:
        # rho_1 = r_2 > 0 for a valid chain; guard kept for hand-built specs
        raise UnboundedSupport("rho_1 vanishes and no cap was given", {"rho": list(rho)})

    budget = delta - virtual_dimension(spec, (0,) * spec.k)
    if budget < 0:
        return []

    def walk(i: int, prefix: Tuple[int, ...], remaining: int) -> Iterator[Multidegree]:
        if i == spec.k:
            if remaining == 0:
                yield prefix
            return
        step = rho[i]
        if cap is not None:
            upper = cap
        elif step > 0:
            upper = remaining // step
        else:
            upper = prefix[-1]
        for di in range(upper + 1):
            if step * di > remaining:
                break
            yield from walk(i + 1, prefix + (di,), remaining - step * di)

    support = list(walk(0, (), budget))
    if uses_chain_bound(spec, cap):
        logger.debug(f"Chain bound applied for rho={list(rho)}; {len(support)} degrees kept")
    return support


def reduce_bundle_degree(
    spec: ProblemSpec,
    insertion: Insertion,
) -> Tuple[ProblemSpec, Insertion, int]:
    """
    Reduce a negative bundle degree to zero by elementary modifications.

    Each step multiplies the insertion by the top Chern class of the level-k
    bundle and lowers every degree by one afterwards.

    Returns:
        (spec with e = 0, modified insertion, shift to subtract from every degree)

    Raises:
        BundleDegreePositive: e > 0.
    """
    e = spec.bundle_degree
    if e > 0:
        raise BundleDegreePositive(
            f"Bundle degree e={e} > 0 is not supported; twist V to degree <= 0 first",
            {"bundle_degree": e},
        )
    if e == 0:
        return spec, insertion, 0
    top = ElemSym(spec.rank(spec.k), spec.k)
    reduced = insertion * Insertion.monomial(*([top] * -e))
    return spec.replace(bundle_degree=0), reduced, -e
