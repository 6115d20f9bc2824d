"""
Data models for Hyperquot virtual-intersection problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from hqvi.errors import InvalidInsertion
from hqvi.utils import complex_list_to_json, hash_payload


Multidegree = Tuple[int, ...]


class SignMode(str, Enum):
    """Sign convention of the coupling term q_j in the Bethe system."""
    FORMULA = "formula"
    DEGENERATION = "degeneration"


class PathStatus(str, Enum):
    """Outcome of tracking one homotopy path."""
    CONVERGED = "converged"
    DIVERGED = "diverged"
    COLLIDED_WITH_DELTA = "collided_with_delta"
    STEP_LIMIT_EXCEEDED = "step_limit_exceeded"


class SolutionSetStatus(str, Enum):
    COMPLETE = "complete"
    INCOMPLETE = "incomplete"


@dataclass(frozen=True)
class ProblemSpec:
    """
    One instance of the virtual-intersection formula.

    Ranks use the boundary conventions r_0 = 0 and r_{k+1} = n. An empty
    ``equivariant_params`` means all epsilon are zero.
    """
    genus: int
    ambient_rank: int
    ranks: Tuple[int, ...]
    bundle_degree: int = 0
    equivariant_params: Tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        object.__setattr__(
            self, "equivariant_params", tuple(complex(x) for x in self.equivariant_params)
        )

    @property
    def k(self) -> int:
        return len(self.ranks)

    def rank(self, j: int) -> int:
        """r_j with r_0 = 0 and r_{k+1} = n."""
        if j <= 0:
            return 0
        if j > self.k:
            return self.ambient_rank
        return self.ranks[j - 1]

    @property
    def rho(self) -> Tuple[int, ...]:
        """Gradient of the virtual dimension: rho_i = r_{i+1} - r_{i-1}."""
        return tuple(self.rank(i + 1) - self.rank(i - 1) for i in range(1, self.k + 1))

    @property
    def flag_dimension(self) -> int:
        return sum(self.rank(i) * (self.rank(i + 1) - self.rank(i)) for i in range(1, self.k + 1))

    @property
    def total_vars(self) -> int:
        return sum(self.ranks)

    @property
    def eps(self) -> Tuple[complex, ...]:
        if self.equivariant_params:
            return self.equivariant_params
        return (0j,) * self.ambient_rank

    @property
    def is_equivariant(self) -> bool:
        return any(e != 0 for e in self.equivariant_params)

    @property
    def level_offsets(self) -> Tuple[int, ...]:
        """Flat index of the first entry of each level 1..k."""
        offsets, acc = [], 0
        for r in self.ranks:
            offsets.append(acc)
            acc += r
        return tuple(offsets)

    def index(self, i: int, j: int) -> int:
        """Flat index of z_{i,j} (both 1-based)."""
        return self.level_offsets[j - 1] + i - 1

    @property
    def orbit_weight(self) -> int:
        return math.prod(math.factorial(r) for r in self.ranks)

    @property
    def expected_orbit_count(self) -> int:
        return math.prod(math.comb(self.rank(j + 1), self.rank(j)) for j in range(1, self.k + 1))

    @property
    def expected_solution_count(self) -> int:
        return math.prod(
            math.perm(self.rank(j + 1), self.rank(j)) for j in range(1, self.k + 1)
        )

    def replace(self, **changes: Any) -> "ProblemSpec":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "genus": self.genus,
            "ambient_rank": self.ambient_rank,
            "ranks": list(self.ranks),
            "bundle_degree": self.bundle_degree,
            "equivariant_params": complex_list_to_json(self.equivariant_params),
        }

    def fingerprint(self) -> str:
        return hash_payload(self.to_dict())


# Insertion primitives

@dataclass(frozen=True)
class ElemSym:
    """e_i of the level-j entries, i.e. c_i of the dual tautological bundle at level j."""
    i: int
    j: int

    def degree(self, spec: ProblemSpec) -> int:
        return self.i

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (0, self.j, self.i)

    def to_string(self) -> str:
        return f"c{self.i}[{self.j}]"


@dataclass(frozen=True)
class EulerCross:
    """Product of (zeta_{s,l} - zeta_{u,l+1}) over both levels; epsilon above level k."""
    level: int

    def degree(self, spec: ProblemSpec) -> int:
        return spec.rank(self.level) * spec.rank(self.level + 1)

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (1, self.level, 0)

    def to_string(self) -> str:
        return f"X[{self.level}]"


Primitive = Union[ElemSym, EulerCross]


@dataclass(frozen=True)
class InsertionTerm:
    coefficient: int
    primitives: Tuple[Primitive, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "primitives", tuple(sorted(self.primitives, key=lambda p: p.sort_key))
        )

    def degree(self, spec: ProblemSpec) -> int:
        return sum(p.degree(spec) for p in self.primitives)

    def times(self, other: "InsertionTerm") -> "InsertionTerm":
        return InsertionTerm(self.coefficient * other.coefficient, self.primitives + other.primitives)

    def to_string(self) -> str:
        factors: List[str] = []
        idx = 0
        while idx < len(self.primitives):
            prim = self.primitives[idx]
            power = 1
            while idx + power < len(self.primitives) and self.primitives[idx + power] == prim:
                power += 1
            factors.append(prim.to_string() + (f"^{power}" if power > 1 else ""))
            idx += power
        if not factors:
            return str(self.coefficient)
        body = "*".join(factors)
        if self.coefficient == 1:
            return body
        if self.coefficient == -1:
            return "-" + body
        return f"{self.coefficient}*{body}"


@dataclass(frozen=True)
class Insertion:
    """
    Integer combination of monomials in insertion primitives.

    Like terms are merged and zero terms dropped on construction, so two
    insertions describing the same class compare equal.
    """
    terms: Tuple[InsertionTerm, ...] = (InsertionTerm(1),)

    def __post_init__(self) -> None:
        merged: Dict[Tuple[Primitive, ...], int] = {}
        for term in self.terms:
            merged[term.primitives] = merged.get(term.primitives, 0) + term.coefficient
        ordered = sorted(
            (InsertionTerm(c, prims) for prims, c in merged.items() if c != 0),
            key=lambda t: [p.sort_key for p in t.primitives],
        )
        object.__setattr__(self, "terms", tuple(ordered))

    @classmethod
    def one(cls) -> "Insertion":
        return cls((InsertionTerm(1),))

    @classmethod
    def monomial(cls, *primitives: Primitive, coefficient: int = 1) -> "Insertion":
        return cls((InsertionTerm(coefficient, tuple(primitives)),))

    @classmethod
    def from_powers(cls, powers: Mapping[Primitive, int], coefficient: int = 1) -> "Insertion":
        prims: List[Primitive] = []
        for prim, p in powers.items():
            if p < 0:
                raise InvalidInsertion(f"Negative exponent for {prim.to_string()}")
            prims.extend([prim] * p)
        return cls.monomial(*prims, coefficient=coefficient)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def primitives(self) -> Iterator[Primitive]:
        for term in self.terms:
            yield from term.primitives

    def degree(self, spec: ProblemSpec) -> Optional[int]:
        """Common cohomological degree of all terms; None for the zero insertion."""
        degrees = {term.degree(spec) for term in self.terms}
        if not degrees:
            return None
        if len(degrees) > 1:
            raise InvalidInsertion(
                f"Insertion {self.to_string()} is not homogeneous: degrees {sorted(degrees)}",
                {"degrees": sorted(degrees)},
            )
        return degrees.pop()

    def __mul__(self, other: Union["Insertion", ElemSym, EulerCross]) -> "Insertion":
        if isinstance(other, (ElemSym, EulerCross)):
            other = Insertion.monomial(other)
        return Insertion(tuple(a.times(b) for a in self.terms for b in other.terms))

    def __add__(self, other: "Insertion") -> "Insertion":
        return Insertion(self.terms + other.terms)

    def power(self, exponent: int) -> "Insertion":
        result = Insertion.one()
        for _ in range(exponent):
            result = result * self
        return result

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        text = " + ".join(term.to_string() for term in self.terms)
        return text.replace("+ -", "- ")

    def fingerprint(self) -> str:
        return hash_payload(self.to_string())

    def __str__(self) -> str:
        return self.to_string()


@dataclass(eq=False)
class GeneratingPolynomial:
    """
    Sparse integer Laurent polynomial in q_1..q_k.

    Absent degrees read as zero; metadata never takes part in equality.
    """
    num_vars: int
    coeffs: Dict[Multidegree, int] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: Dict[Multidegree, int] = {}
        for d, c in self.coeffs.items():
            d = tuple(int(x) for x in d)
            if len(d) != self.num_vars:
                raise ValueError(f"Multidegree {d} has length {len(d)}, expected {self.num_vars}")
            c = int(c)
            if c:
                clean[d] = clean.get(d, 0) + c
        self.coeffs = {d: c for d, c in sorted(clean.items()) if c}

    @classmethod
    def zero(cls, num_vars: int) -> "GeneratingPolynomial":
        return cls(num_vars)

    @classmethod
    def monomial(cls, d: Sequence[int], coefficient: int = 1) -> "GeneratingPolynomial":
        return cls(len(d), {tuple(d): coefficient})

    @classmethod
    def one(cls, num_vars: int) -> "GeneratingPolynomial":
        return cls.monomial((0,) * num_vars)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, d: Sequence[int]) -> int:
        return self.coeffs.get(tuple(d), 0)

    def degrees(self) -> List[Multidegree]:
        return sorted(self.coeffs)

    def shift(self, delta: Sequence[int]) -> "GeneratingPolynomial":
        """Multiply by q^delta."""
        return GeneratingPolynomial(
            self.num_vars,
            {tuple(a + b for a, b in zip(d, delta)): c for d, c in self.coeffs.items()},
            dict(self.metadata),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratingPolynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.coeffs == other.coeffs

    def __add__(self, other: "GeneratingPolynomial") -> "GeneratingPolynomial":
        merged = dict(self.coeffs)
        for d, c in other.coeffs.items():
            merged[d] = merged.get(d, 0) + c
        return GeneratingPolynomial(self.num_vars, merged)

    def __sub__(self, other: "GeneratingPolynomial") -> "GeneratingPolynomial":
        return self + GeneratingPolynomial(other.num_vars, {d: -c for d, c in other.coeffs.items()})

    def __mul__(self, other: Union["GeneratingPolynomial", int]) -> "GeneratingPolynomial":
        if isinstance(other, int):
            return GeneratingPolynomial(self.num_vars, {d: c * other for d, c in self.coeffs.items()})
        product: Dict[Multidegree, int] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = tuple(a + b for a, b in zip(d1, d2))
                product[d] = product.get(d, 0) + c1 * c2
        return GeneratingPolynomial(self.num_vars, product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "GeneratingPolynomial":
        result = GeneratingPolynomial.one(self.num_vars)
        for _ in range(exponent):
            result = result * self
        return result

    def evaluate(self, q: Sequence[complex]) -> complex:
        total = 0
        for d, c in self.coeffs.items():
            term = c
            for qj, dj in zip(q, d):
                term = term * qj ** dj
            total = total + term
        return total

    def max_abs_difference(self, other: "GeneratingPolynomial") -> int:
        diff = self - other
        return max((abs(c) for c in diff.coeffs.values()), default=0)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "num_vars": self.num_vars,
            "terms": [
                {"degree": list(d), "coefficient": str(c)}
                for d, c in self.coeffs.items()
            ],
            "metadata": self.metadata,
        }

    def to_rows(self) -> List[List[str]]:
        header = [f"d{j}" for j in range(1, self.num_vars + 1)] + ["coefficient"]
        return [header] + [[str(x) for x in d] + [str(c)] for d, c in self.coeffs.items()]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in self.coeffs.items():
            mono = "*".join(
                f"q{j}" + (f"^{x}" if x != 1 else "")
                for j, x in enumerate(d, start=1) if x != 0
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


def _finite_or_none(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


@dataclass
class BetheSolution:
    """
    A solution of the Bethe system, flat over levels 1..k.

    ``z_extended`` holds the same point polished in extended precision when
    dd mode is active.
    """
    z: Tuple[complex, ...]
    residual_norm: float
    min_separation: float
    jacobian_condition: float
    separation_tolerance: float = 0.0
    near_degenerate: bool = False
    z_extended: Optional[Tuple[Any, ...]] = None

    def values(self) -> Tuple[Any, ...]:
        """Best available coordinates."""
        return self.z_extended if self.z_extended is not None else self.z

    def levels(self, spec: ProblemSpec, extended: bool = True) -> List[Tuple[Any, ...]]:
        values = self.values() if extended else self.z
        return [
            tuple(values[off:off + r]) for off, r in zip(spec.level_offsets, spec.ranks)
        ]

    def to_dict(self) -> dict:
        return {
            "z": complex_list_to_json(self.z),
            "residual_norm": self.residual_norm,
            "min_separation": _finite_or_none(self.min_separation),
            "jacobian_condition": _finite_or_none(self.jacobian_condition),
            "near_degenerate": self.near_degenerate,
        }


@dataclass
class HomotopyPath:
    """Tracking record for one start point."""
    start: Tuple[complex, ...]
    end: Optional[BetheSolution] = None
    steps_taken: int = 0
    failures: int = 0
    status: PathStatus = PathStatus.STEP_LIMIT_EXCEEDED
    attempt: int = 0

    @property
    def converged(self) -> bool:
        return self.status == PathStatus.CONVERGED

    def to_dict(self) -> dict:
        return {
            "start": complex_list_to_json(self.start),
            "end": self.end.to_dict() if self.end else None,
            "steps_taken": self.steps_taken,
            "failures": self.failures,
            "status": self.status.value,
            "attempt": self.attempt,
        }


@dataclass
class SolutionSet:
    """One representative per within-level permutation orbit."""
    spec: ProblemSpec
    q: Tuple[complex, ...]
    representatives: List[BetheSolution]
    orbit_weight: int
    expected_orbit_count: int
    status: SolutionSetStatus = SolutionSetStatus.COMPLETE
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    paths: List[HomotopyPath] = field(default_factory=list)

    @property
    def is_complete(self) -> bool:
        return self.status == SolutionSetStatus.COMPLETE

    @property
    def solution_count(self) -> int:
        return len(self.representatives) * self.orbit_weight

    def to_dict(self) -> dict:
        return {
            "q": complex_list_to_json(self.q),
            "representatives": [rep.to_dict() for rep in self.representatives],
            "orbit_weight": self.orbit_weight,
            "expected_orbit_count": self.expected_orbit_count,
            "solution_count": self.solution_count,
            "status": self.status.value,
            "diagnostics": self.diagnostics,
        }


@dataclass
class PointValue:
    """Right-hand side of the main formula at one parameter point."""
    value: complex
    q: Tuple[complex, ...]
    eps: Tuple[complex, ...]
    solution_count_used: int
    worst_condition: float
    magnitude: float = 0.0
    extended_value: Optional[Any] = None

    def best_value(self) -> Any:
        return self.extended_value if self.extended_value is not None else self.value

    def to_dict(self) -> dict:
        return {
            "value": complex_list_to_json([self.value])[0],
            "q": complex_list_to_json(self.q),
            "eps": complex_list_to_json(self.eps),
            "solution_count_used": self.solution_count_used,
            "worst_condition": self.worst_condition,
            "magnitude": self.magnitude,
        }
