"""
Tests for the twisting, elementary-modification and vanishing identities.
"""

import pytest

from hqvi.core import parse_insertion, virtual_dimension
from hqvi.errors import InputError
from hqvi.identities import (
    check_elementary_modification,
    check_twisting,
    check_vanishing,
    first_level_insertion,
    vanishing_applies,
)
from hqvi.models import GeneratingPolynomial, Insertion, ProblemSpec

GOLDEN = GeneratingPolynomial(2, {(10, 8): 6 ** 13, (9, 9): 20 * 6 ** 13, (8, 10): 6 ** 13})


class TestVanishing:
    @pytest.mark.parametrize("d", [(11, 7), (13, 5)])
    def test_negative_tail_forces_zero(self, golden_spec, d):
        report = check_vanishing(golden_spec, Insertion.one(), d, polynomial=GOLDEN)
        assert report.applicable
        assert report.passed
        assert report.details["coefficient"] == "0"

    def test_degree_outside_hypothesis_still_records_coefficient(self, golden_spec):
        report = check_vanishing(golden_spec, Insertion.one(), (5, 13), polynomial=GOLDEN)
        assert not report.applicable
        assert report.details["tail_sums"] == [0, 15]
        assert report.details["coefficient"] == "0"

    def test_non_vanishing_degree_is_not_applicable(self, golden_spec):
        report = check_vanishing(golden_spec, Insertion.one(), (9, 9), polynomial=GOLDEN)
        assert not report.applicable
        assert report.passed
        assert report.details["relative_dimensions"] == [-3, 3]
        assert int(report.details["coefficient"]) == 20 * 6 ** 13

    def test_nonzero_coefficient_in_vanishing_range_fails(self, golden_spec):
        wrong = GOLDEN + GeneratingPolynomial.monomial((11, 7), 5)
        report = check_vanishing(golden_spec, Insertion.one(), (11, 7), polynomial=wrong)
        assert not report.passed
        assert report.max_mismatch == 5
        assert report.to_dict()["max_mismatch"] == "5"

    def test_vanishing_applies(self, golden_spec):
        assert vanishing_applies(golden_spec, (11, 7))
        assert not vanishing_applies(golden_spec, (10, 8))

    def test_wrong_degree_length(self, golden_spec):
        with pytest.raises(InputError):
            check_vanishing(golden_spec, Insertion.one(), (1,), polynomial=GOLDEN)


class TestArgumentChecks:
    def test_twisting_level_out_of_range(self, two_step_spec, options):
        with pytest.raises(InputError):
            check_twisting(two_step_spec, Insertion.one(), 3, options)
        with pytest.raises(InputError):
            check_twisting(two_step_spec, Insertion.one(), 0, options)

    def test_elementary_modification_needs_degree_zero(self, line_spec, options):
        with pytest.raises(InputError):
            check_elementary_modification(line_spec.replace(bundle_degree=-1), Insertion.one(), options)


class TestPipelineIdentities:
    def test_twisting_on_the_line(self, line_spec, options):
        report = check_twisting(line_spec, parse_insertion("c1[1]^3"), 1, options)
        assert report.passed
        assert report.details["shift"] == [1]

    def test_elementary_modification_on_the_line(self, line_spec, options):
        report = check_elementary_modification(line_spec, parse_insertion("c1[1]^2"), options)
        assert report.passed

    @pytest.mark.slow
    @pytest.mark.parametrize("ell", [1, 2])
    def test_twisting_two_step_genus_one(self, ell, options):
        spec = ProblemSpec(genus=1, ambient_rank=3, ranks=(1, 2))
        assert check_twisting(spec, parse_insertion("c1[1]^2"), ell, options).passed

    @pytest.mark.slow
    def test_elementary_modification_punctual(self, options):
        spec = ProblemSpec(genus=1, ambient_rank=2, ranks=(2, 2))
        assert check_elementary_modification(spec, parse_insertion("c2[1]"), options).passed


IDENTITY_MATRIX = [
    (ranks, n, g)
    for ranks, n in [
        ((1, 1), 2), ((1, 2), 3), ((2, 3), 4), ((1, 3), 4), ((2, 2), 4),
        ((1,), 3), ((2,), 4), ((3,), 4), ((1, 2), 4),
    ]
    for g in range(4)
]


class TestFirstLevelInsertion:
    @pytest.mark.parametrize("ranks, n, g", IDENTITY_MATRIX)
    def test_degree_is_reached_by_a_first_level_degree(self, ranks, n, g):
        spec = ProblemSpec(genus=g, ambient_rank=n, ranks=ranks)
        delta = first_level_insertion(spec).degree(spec)
        assert delta >= 0
        offset = delta - virtual_dimension(spec, (0,) * spec.k)
        assert offset > 0
        assert offset % spec.rho[0] == 0
        assert delta - spec.rho[0] < 0 or offset == spec.rho[0]

    def test_golden_chain(self, golden_spec):
        assert first_level_insertion(golden_spec) == Insertion.one()
        assert first_level_insertion(ProblemSpec(genus=0, ambient_rank=3, ranks=(1, 2))) == parse_insertion("c1[1]^5")


@pytest.mark.slow
class TestIdentityMatrix:
    @pytest.mark.parametrize("ranks, n, g", IDENTITY_MATRIX)
    def test_twisting_at_both_ends(self, ranks, n, g, options):
        spec = ProblemSpec(genus=g, ambient_rank=n, ranks=ranks)
        insertion = first_level_insertion(spec)
        for ell in sorted({1, spec.k}):
            report = check_twisting(spec, insertion, ell, options)
            assert report.passed, report.to_dict()

    @pytest.mark.parametrize("ranks, n, g", IDENTITY_MATRIX)
    def test_elementary_modification(self, ranks, n, g, options):
        spec = ProblemSpec(genus=g, ambient_rank=n, ranks=ranks)
        report = check_elementary_modification(spec, first_level_insertion(spec), options)
        assert report.passed, report.to_dict()
