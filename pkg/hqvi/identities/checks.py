"""
Structural identities between generating polynomials.

Every comparison is between exact integer polynomials, after rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

from hqvi.config import get_logger
from hqvi.core import relative_virtual_dimensions, validate_spec, virtual_dimension
from hqvi.errors import InputError
from hqvi.interpolate import ComputeOptions, compute
from hqvi.models import ElemSym, EulerCross, GeneratingPolynomial, Insertion, ProblemSpec

logger = get_logger("identities")


@dataclass
class IdentityReport:
    """Outcome of one identity check."""
    name: str
    passed: bool
    max_mismatch: int = 0
    applicable: bool = True
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_mismatch": str(self.max_mismatch),
            "applicable": self.applicable,
            "details": self.details,
        }


def _log_report(report: IdentityReport) -> IdentityReport:
    if report.passed:
        logger.info(f"✅ {report.name} holds (applicable={report.applicable})")
    else:
        logger.warning(f"❌ {report.name} fails with mismatch {report.max_mismatch}")
    return report


def first_level_insertion(spec: ProblemSpec) -> Insertion:
    """c_1[1]^delta for the smallest delta >= 0 reached by d = (m, 0, ..., 0) with m >= 1."""
    base = virtual_dimension(spec, (0,) * spec.k)
    m = max(1, -(base // spec.rho[0]))
    return Insertion.from_powers({ElemSym(1, 1): base + spec.rho[0] * m})


def check_twisting(
    spec: ProblemSpec,
    insertion: Insertion,
    ell: int,
    options: Optional[ComputeOptions] = None,
    polynomial: Optional[GeneratingPolynomial] = None,
) -> IdentityReport:
    """
    Inserting the level-ell Euler class multiplies the series by q_1^{r_1}...q_ell^{r_ell}.
    """
    spec = validate_spec(spec)
    if not 1 <= ell <= spec.k:
        raise InputError(f"Level {ell} is out of range 1..{spec.k}", {"level": ell, "k": spec.k})
    base = polynomial if polynomial is not None else compute(spec, insertion, options)
    twisted = compute(spec, insertion * EulerCross(ell), options)
    eta = tuple(spec.rank(i) if i <= ell else 0 for i in range(1, spec.k + 1))
    expected = base.shift(eta)
    mismatch = twisted.max_abs_difference(expected)
    return _log_report(IdentityReport(
        name=f"twisting[{ell}]",
        passed=mismatch == 0,
        max_mismatch=mismatch,
        details={
            "spec": spec.to_dict(),
            "insertion": insertion.to_string(),
            "shift": list(eta),
            "terms": len(base.coeffs),
        },
    ))


def check_elementary_modification(
    spec: ProblemSpec,
    insertion: Insertion,
    options: Optional[ComputeOptions] = None,
) -> IdentityReport:
    """
    q_1...q_k B_{e=-1}[insertion] = B_{e=0}[insertion * c_{r_k}[k]].
    """
    spec = validate_spec(spec)
    if spec.bundle_degree != 0:
        raise InputError(
            f"Elementary modification starts from bundle degree 0, got {spec.bundle_degree}",
            {"bundle_degree": spec.bundle_degree},
        )
    lowered = compute(spec.replace(bundle_degree=-1), insertion, options)
    raised = compute(spec, insertion * ElemSym(spec.rank(spec.k), spec.k), options)
    mismatch = lowered.shift((1,) * spec.k).max_abs_difference(raised)
    return _log_report(IdentityReport(
        name="elementary_modification",
        passed=mismatch == 0,
        max_mismatch=mismatch,
        details={
            "spec": spec.to_dict(),
            "insertion": insertion.to_string(),
            "terms": len(raised.coeffs),
        },
    ))


def vanishing_applies(spec: ProblemSpec, d: Sequence[int]) -> bool:
    """True when some tail sum of relative virtual dimensions is negative."""
    relative = relative_virtual_dimensions(spec, d)
    return any(sum(relative[j:]) < 0 for j in range(len(relative)))


def check_vanishing(
    spec: ProblemSpec,
    insertion: Insertion,
    d: Sequence[int],
    options: Optional[ComputeOptions] = None,
    polynomial: Optional[GeneratingPolynomial] = None,
) -> IdentityReport:
    """
    The coefficient at d vanishes when a tail of relative dimensions is negative.

    Degrees outside the hypothesis are reported as not applicable and pass,
    with the coefficient recorded.
    """
    spec = validate_spec(spec)
    d = tuple(int(x) for x in d)
    if len(d) != spec.k:
        raise InputError(f"Degree {list(d)} has length {len(d)}, expected {spec.k}")
    relative = relative_virtual_dimensions(spec, d)
    tails = [sum(relative[j:]) for j in range(len(relative))]
    applicable = any(t < 0 for t in tails)

    poly = polynomial if polynomial is not None else compute(spec, insertion, options)
    coefficient = poly.coefficient(d)
    return _log_report(IdentityReport(
        name=f"vanishing{list(d)}",
        passed=coefficient == 0 if applicable else True,
        max_mismatch=abs(coefficient) if applicable else 0,
        applicable=applicable,
        details={
            "degree": list(d),
            "relative_dimensions": relative,
            "tail_sums": tails,
            "coefficient": str(coefficient),
        },
    ))
