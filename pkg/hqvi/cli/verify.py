"""
Acceptance matrix behind ``hqvi verify``.

Each group compares pipeline output against a closed form or an identity
and yields one VerifyResult per case. Errors inside a case fail that case
only.
"""

import cmath
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from hqvi.config import Method, Precision, get_logger
from hqvi.core import parse_insertion
from hqvi.errors import HQVIError, HypothesisNotMet
from hqvi.identities import check_elementary_modification, check_twisting, check_vanishing, first_level_insertion
from hqvi.interpolate import ComputeOptions, compute
from hqvi.models import ElemSym, GeneratingPolynomial, Insertion, ProblemSpec
from hqvi.oracles import (
    oracle_maximal_subsheaf_factor,
    oracle_points,
    oracle_points_segre,
    oracle_quot_k1_coefficient,
    oracle_quot_k1_polynomial,
    oracle_two_step,
    points_insertion,
    segre_insertion,
    two_step_degree,
    two_step_insertion,
)
from hqvi.solver import solve
from hqvi.utils import canonical_json, derive_seed, format_duration

logger = get_logger("verify")

GOLDEN_SPEC = ProblemSpec(genus=13, ambient_rank=3, ranks=(1, 2))
GOLDEN = GeneratingPolynomial(2, {(10, 8): 6 ** 13, (9, 9): 20 * 6 ** 13, (8, 10): 6 ** 13})


@dataclass
class VerifyOptions:
    seed: int = 0
    seed2: int = 1
    precision: Optional[Precision] = None
    retries: Optional[int] = None
    threads: Optional[int] = None
    cases: Optional[int] = None

    def compute_options(self, method: Method = Method.DEGENERATION, seed: Optional[int] = None) -> ComputeOptions:
        return ComputeOptions(
            method=method,
            precision=self.precision,
            seed=self.seed if seed is None else seed,
            retries=self.retries,
            threads=self.threads,
        )

    def cell_cases(self, default: int) -> int:
        return self.cases if self.cases is not None else default


@dataclass
class VerifyResult:
    group: str
    name: str
    passed: bool
    detail: str = ""
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "error": self.error,
        }


@dataclass
class VerificationRun:
    """Shared state across groups: options, rngs and the genus-13 polynomial."""
    options: VerifyOptions
    cache: Dict[str, GeneratingPolynomial] = field(default_factory=dict)

    def rng(self, tag: int) -> np.random.Generator:
        return np.random.default_rng(derive_seed(self.options.seed, tag))

    def golden(self) -> GeneratingPolynomial:
        if "golden" not in self.cache:
            self.cache["golden"] = compute(GOLDEN_SPEC, Insertion.one(), self.options.compute_options())
        return self.cache["golden"]

    def compute(self, spec: ProblemSpec, insertion: Insertion, **kwargs) -> GeneratingPolynomial:
        return compute(spec, insertion, self.options.compute_options(**kwargs))


Check = Callable[[], Tuple[bool, str]]


def _case(group: str, name: str, check: Check) -> VerifyResult:
    try:
        passed, detail = check()
        return VerifyResult(group, name, passed, detail)
    except HQVIError as e:
        logger.warning(f"Case {group}/{name} raised {e.code}: {e.message}")
        return VerifyResult(group, name, False, e.message, e.code)


def _compare(actual: GeneratingPolynomial, expected: GeneratingPolynomial) -> Tuple[bool, str]:
    if actual == expected:
        return True, f"{len(expected.coeffs)} term(s) match"
    return False, f"got {actual!r}, expected {expected!r}"


def _random_q(rng: np.random.Generator, k: int) -> List[complex]:
    radii = rng.uniform(0.5, 2.0, size=k)
    angles = rng.uniform(0.0, 2 * math.pi, size=k)
    return [complex(r * cmath.exp(1j * a)) for r, a in zip(radii, angles)]


def _weighted_exponents(rng: np.random.Generator, r: int, weight: int) -> List[int]:
    """Random exponents of e_1..e_r with sum i*m_i = weight."""
    m = [0] * r
    while weight > 0:
        i = int(rng.integers(1, min(r, weight) + 1))
        m[i - 1] += 1
        weight -= i
    return m


def group_golden(run: VerificationRun) -> Iterator[VerifyResult]:
    yield _case("golden", "oracle", lambda: _compare(oracle_two_step(13, 3, 0, ()), GOLDEN))
    yield _case("golden", "pipeline", lambda: _compare(run.golden(), GOLDEN))


def group_two_step(run: VerificationRun) -> Iterator[VerifyResult]:
    rng = run.rng(0x25)
    for n in (3, 4):
        for g in (0, 1, 2):
            for index in range(run.options.cell_cases(10)):
                ell, m = 0, [0] * (n - 1)
                for _ in range(20):
                    ell = int(rng.integers(0, 5))
                    m = [int(x) for x in rng.integers(0, 3, size=n - 1)]
                    weight = ell + sum(i * x for i, x in enumerate(m, start=1))
                    if weight <= 6 and two_step_degree(g, n, ell, m) is not None:
                        break
                spec = ProblemSpec(genus=g, ambient_rank=n, ranks=(1, n - 1))
                yield _case(
                    "two_step", f"n={n} g={g} l={ell} m={m}",
                    lambda spec=spec, n=n, g=g, ell=ell, m=m: _compare(
                        run.compute(spec, two_step_insertion(n, ell, m)), oracle_two_step(g, n, ell, m)
                    ),
                )


def group_punctual(run: VerificationRun) -> Iterator[VerifyResult]:
    rng = run.rng(0x9)
    for n, k in ((2, 2), (2, 3), (3, 2)):
        for index in range(run.options.cell_cases(5)):
            exponents = {(n, j): int(rng.integers(0, 3)) for j in range(1, k + 1)}
            if rng.random() < 0.2:
                exponents[(int(rng.integers(1, n)), int(rng.integers(1, k + 1)))] = 1
            insertion = points_insertion(exponents)
            expected = oracle_points(n, k, exponents)

            def check(n=n, k=k, insertion=insertion, expected=expected) -> Tuple[bool, str]:
                results = [
                    run.compute(ProblemSpec(genus=g, ambient_rank=n, ranks=(n,) * k), insertion)
                    for g in (0, 5)
                ]
                if results[0] != results[1]:
                    return False, f"genus dependence: {results[0]!r} vs {results[1]!r}"
                return _compare(results[0], expected)

            yield _case("punctual", f"n={n} k={k} {insertion}", check)

    for n, degrees in ((2, (2, 0)), (2, (0, 2)), (2, (2, 2)), (3, (3, 0)), (2, (1, 1))):
        insertion = segre_insertion(n, degrees)
        expected = oracle_points_segre(n, len(degrees), degrees)
        spec = ProblemSpec(genus=1, ambient_rank=n, ranks=(n,) * len(degrees))
        yield _case(
            "punctual", f"n={n} segre {list(degrees)}",
            lambda spec=spec, insertion=insertion, expected=expected: _compare(run.compute(spec, insertion), expected),
        )


def group_quot_k1(run: VerificationRun) -> Iterator[VerifyResult]:
    for n in (2, 3, 4):
        spec = ProblemSpec(genus=0, ambient_rank=n, ranks=(1,))
        insertion = parse_insertion(f"c1[1]^{n - 1}")
        yield _case(
            "quot_k1", f"P^{n - 1} {insertion}",
            lambda spec=spec, insertion=insertion: _compare(
                run.compute(spec, insertion), GeneratingPolynomial.monomial((0,))
            ),
        )
    for d in range(4):
        insertion = parse_insertion(f"c1[1]^{2 * d + 1}")
        yield _case(
            "quot_k1", f"P^1 {insertion}",
            lambda d=d, insertion=insertion: _compare(
                run.compute(ProblemSpec(genus=0, ambient_rank=2, ranks=(1,)), insertion),
                GeneratingPolynomial.monomial((d,)),
            ),
        )

    rng = run.rng(0x1)
    for n, r in ((2, 1), (3, 1), (3, 2), (4, 2)):
        for g in (0, 1, 2):
            for index in range(run.options.cell_cases(2)):
                base = (1 - g) * r * (n - r)
                degrees = [d for d in range(3) if base + n * d >= 0]
                d = degrees[int(rng.integers(0, len(degrees)))]
                m = _weighted_exponents(rng, r, base + n * d)
                insertion = Insertion.from_powers({ElemSym(i, 1): x for i, x in enumerate(m, start=1)})
                spec = ProblemSpec(genus=g, ambient_rank=n, ranks=(r,))
                yield _case(
                    "quot_k1", f"n={n} r={r} g={g} m={m}",
                    lambda spec=spec, insertion=insertion, g=g, n=n, r=r, m=m: _compare(
                        run.compute(spec, insertion), oracle_quot_k1_polynomial(g, n, r, m)
                    ),
                )


def group_counts(run: VerificationRun) -> Iterator[VerifyResult]:
    rng = run.rng(0xC)
    for ranks, n in (((1,), 2), ((2,), 3), ((1, 2), 3), ((2, 3), 4)):
        spec = ProblemSpec(genus=0, ambient_rank=n, ranks=ranks)
        for index in range(run.options.cell_cases(20)):
            q = _random_q(rng, spec.k)

            def check(spec=spec, q=q, index=index) -> Tuple[bool, str]:
                sols = solve(spec, q, seed=derive_seed(run.options.seed, 0xC, index))
                found = len(sols.representatives)
                return found == spec.expected_orbit_count, (
                    f"{found}/{spec.expected_orbit_count} orbits, {sols.solution_count} solutions"
                )

            yield _case("counts", f"r={list(ranks)} n={n} #{index}", check)


def group_equivariant(run: VerificationRun) -> Iterator[VerifyResult]:
    for g, text in ((0, "c1[1]^2"), (0, "c2[1]"), (1, "c1[1]^3")):
        spec = ProblemSpec(genus=g, ambient_rank=3, ranks=(2,))
        insertion = parse_insertion(text)
        yield _case(
            "equivariant", f"n=3 r=2 g={g} {insertion}",
            lambda spec=spec, insertion=insertion: _compare(
                run.compute(spec, insertion, method=Method.EQUIVARIANT),
                run.compute(spec, insertion),
            ),
        )


def _report_check(report) -> Tuple[bool, str]:
    return report.passed, f"mismatch {report.max_mismatch}, applicable={report.applicable}"


IDENTITY_CHAINS = (
    ((1,), 2),
    ((1,), 3),
    ((2,), 4),
    ((3,), 4),
    ((1, 1), 2),
    ((1, 2), 3),
    ((2, 3), 4),
    ((1, 3), 4),
    ((2, 2), 4),
    ((1, 2), 4),
)
IDENTITY_GENERA = (0, 1, 2, 3)


def _identity_specs() -> Iterator[ProblemSpec]:
    for ranks, n in IDENTITY_CHAINS:
        for g in IDENTITY_GENERA:
            yield ProblemSpec(genus=g, ambient_rank=n, ranks=ranks)


def group_twisting(run: VerificationRun) -> Iterator[VerifyResult]:
    for spec in _identity_specs():
        insertion = first_level_insertion(spec)
        for ell in sorted({1, spec.k}):
            yield _case(
                "twisting", f"g={spec.genus} r={list(spec.ranks)} n={spec.ambient_rank} {insertion} l={ell}",
                lambda spec=spec, insertion=insertion, ell=ell: _report_check(
                    check_twisting(spec, insertion, ell, run.options.compute_options())
                ),
            )

    punctual = ProblemSpec(genus=0, ambient_rank=2, ranks=(2, 2))
    yield _case(
        "twisting", "g=0 r=[2, 2] n=2 1 l=2",
        lambda: _report_check(check_twisting(punctual, Insertion.one(), 2, run.options.compute_options())),
    )


def group_elementary_modification(run: VerificationRun) -> Iterator[VerifyResult]:
    for spec in _identity_specs():
        insertion = first_level_insertion(spec)
        yield _case(
            "elementary_modification", f"g={spec.genus} r={list(spec.ranks)} n={spec.ambient_rank} {insertion}",
            lambda spec=spec, insertion=insertion: _report_check(
                check_elementary_modification(spec, insertion, run.options.compute_options())
            ),
        )

    punctual = ProblemSpec(genus=1, ambient_rank=2, ranks=(2, 2))
    yield _case(
        "elementary_modification", "g=1 r=[2, 2] n=2 c2[1]",
        lambda: _report_check(
            check_elementary_modification(punctual, parse_insertion("c2[1]"), run.options.compute_options())
        ),
    )


def group_vanishing(run: VerificationRun) -> Iterator[VerifyResult]:
    for d in ((11, 7), (13, 5), (5, 13)):
        yield _case(
            "vanishing", f"g=13 d={list(d)}",
            lambda d=d: _report_check(
                check_vanishing(GOLDEN_SPEC, Insertion.one(), d, polynomial=run.golden())
            ),
        )

    def non_vanishing() -> Tuple[bool, str]:
        report = check_vanishing(GOLDEN_SPEC, Insertion.one(), (9, 9), polynomial=run.golden())
        coefficient = int(report.details["coefficient"])
        return (not report.applicable and coefficient == 20 * 6 ** 13), f"coefficient {coefficient}"

    yield _case("vanishing", "g=13 d=[9, 9] non-vanishing", non_vanishing)


def group_maximal_subsheaf(run: VerificationRun) -> Iterator[VerifyResult]:
    def golden_split() -> Tuple[bool, str]:
        split = oracle_maximal_subsheaf_factor(GOLDEN_SPEC, Insertion.one(), (10, 8))
        spec = split.reduced_spec
        _, reduced = oracle_quot_k1_coefficient(spec.genus, spec.ambient_rank, spec.ranks[0], (), spec.bundle_degree)
        pipeline = run.compute(spec, split.reduced_insertion).coefficient(split.reduced_degree)
        ok = split.factor == 3 ** 13 and reduced == pipeline == 2 ** 13
        return ok and split.factor * reduced == GOLDEN.coefficient((10, 8)), (
            f"m = {split.factor}, reduced = {reduced} (pipeline {pipeline})"
        )

    def genus_one() -> Tuple[bool, str]:
        try:
            oracle_maximal_subsheaf_factor(GOLDEN_SPEC.replace(genus=1), Insertion.one(), (1, 1))
        except HypothesisNotMet:
            return True, "rejected"
        return False, "genus 1 was accepted"

    yield _case("maximal_subsheaf", "g=13 d=[10, 8]", golden_split)
    yield _case("maximal_subsheaf", "g=1 rejected", genus_one)


def group_seed_invariance(run: VerificationRun) -> Iterator[VerifyResult]:
    spec = ProblemSpec(genus=2, ambient_rank=3, ranks=(1, 2))
    insertion = parse_insertion("c1[1]")

    def pair() -> Tuple[bool, str]:
        first = run.compute(spec, insertion)
        second = run.compute(spec, insertion, seed=run.options.seed2)
        return _compare(first, second)

    def byte_identical() -> Tuple[bool, str]:
        outputs = [canonical_json(run.compute(spec, insertion).to_dict()) for _ in range(2)]
        return outputs[0] == outputs[1], f"{len(outputs[0])} bytes"

    yield _case("seed_invariance", f"seeds {run.options.seed}/{run.options.seed2}", pair)
    yield _case("seed_invariance", "byte-identical JSON", byte_identical)


GROUPS: Dict[str, Callable[[VerificationRun], Iterator[VerifyResult]]] = {
    "golden": group_golden,
    "two_step": group_two_step,
    "punctual": group_punctual,
    "quot_k1": group_quot_k1,
    "counts": group_counts,
    "equivariant": group_equivariant,
    "twisting": group_twisting,
    "elementary_modification": group_elementary_modification,
    "vanishing": group_vanishing,
    "maximal_subsheaf": group_maximal_subsheaf,
    "seed_invariance": group_seed_invariance,
}


def run_verification(only: Optional[Sequence[str]], options: VerifyOptions) -> List[VerifyResult]:
    """Run the selected groups in a fixed order."""
    selected = [name for name in GROUPS if not only or name in only]
    run = VerificationRun(options)
    results: List[VerifyResult] = []
    for name in selected:
        started = time.perf_counter()
        group_results = list(GROUPS[name](run))
        failed = sum(not r.passed for r in group_results)
        logger.info(
            f"{'✅' if not failed else '❌'} {name}: {len(group_results) - failed}/{len(group_results)} passed "
            f"in {format_duration(time.perf_counter() - started)}"
        )
        results.extend(group_results)
    return results


def format_table(results: Sequence[VerifyResult]) -> str:
    rows = [("GROUP", "CASE", "RESULT", "DETAIL")] + [
        (r.group, r.name, "PASS" if r.passed else "FAIL", r.detail if r.error is None else f"{r.error}: {r.detail}")
        for r in results
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = [
        "  ".join(cell.ljust(width) for cell, width in zip(row[:3], widths)) + "  " + row[3]
        for row in rows
    ]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} passed")
    return "\n".join(lines)
