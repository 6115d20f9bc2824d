"""
Tests for spec validation, virtual dimensions, degree support and insertions.
"""

import pytest

from hqvi.core import (
    degree_support,
    parse_insertion,
    reduce_bundle_degree,
    relative_virtual_dimensions,
    uses_chain_bound,
    validate_insertion,
    validate_spec,
    virtual_dimension,
)
from hqvi.errors import (
    BundleDegreePositive,
    EquivariantParamsDegenerate,
    InputError,
    InsertionParseError,
    InvalidInsertion,
    RankChainInvalid,
)
from hqvi.models import ElemSym, EulerCross, GeneratingPolynomial, Insertion, ProblemSpec


class TestValidateSpec:
    @pytest.mark.parametrize("ranks, n", [((2, 1), 3), ((4,), 3), ((0, 1), 2), ((), 2)])
    def test_bad_chains(self, ranks, n):
        with pytest.raises(RankChainInvalid):
            validate_spec(ProblemSpec(genus=0, ambient_rank=n, ranks=ranks))

    def test_negative_genus(self):
        with pytest.raises(InputError):
            validate_spec(ProblemSpec(genus=-1, ambient_rank=2, ranks=(1,)))

    def test_punctual_chain_allowed(self):
        spec = ProblemSpec(genus=0, ambient_rank=2, ranks=(2, 2))
        assert validate_spec(spec) == spec

    def test_zero_eps_collapses(self):
        spec = ProblemSpec(genus=0, ambient_rank=2, ranks=(1,), equivariant_params=(0, 1e-16))
        assert validate_spec(spec).equivariant_params == ()

    def test_coincident_eps(self):
        spec = ProblemSpec(genus=0, ambient_rank=3, ranks=(1,), equivariant_params=(0.1, 0.2, 0.1))
        with pytest.raises(EquivariantParamsDegenerate):
            validate_spec(spec)

    def test_eps_length(self):
        spec = ProblemSpec(genus=0, ambient_rank=3, ranks=(1,), equivariant_params=(0.1, 0.2))
        with pytest.raises(InputError):
            validate_spec(spec)


class TestVirtualDimension:
    def test_golden_degree_is_dimension_zero(self, golden_spec):
        assert virtual_dimension(golden_spec, (10, 8)) == 0
        assert virtual_dimension(golden_spec, (9, 9)) == 0

    def test_projective_line(self, line_spec):
        assert [virtual_dimension(line_spec, (d,)) for d in range(3)] == [1, 3, 5]

    def test_bundle_degree_term(self):
        spec = ProblemSpec(genus=13, ambient_rank=2, ranks=(1,), bundle_degree=-8)
        assert virtual_dimension(spec, (2,)) == 0

    @pytest.mark.parametrize("d", [(9, 9), (11, 7), (5, 13), (0, 0)])
    def test_relative_dimensions_sum(self, golden_spec, d):
        assert sum(relative_virtual_dimensions(golden_spec, d)) == virtual_dimension(golden_spec, d)

    def test_relative_dimensions_values(self, golden_spec):
        assert relative_virtual_dimensions(golden_spec, (9, 9)) == [-3, 3]
        assert relative_virtual_dimensions(golden_spec, (11, 7)) == [3, -3]
        assert relative_virtual_dimensions(golden_spec, (10, 8)) == [0, 0]


class TestDegreeSupport:
    def test_golden_support(self, golden_spec):
        support = degree_support(golden_spec, Insertion.one())
        assert len(support) == 19
        assert support[0] == (0, 18) and support[-1] == (18, 0)
        assert (10, 8) in support

    def test_single_level(self, line_spec):
        assert degree_support(line_spec, parse_insertion("c1[1]^3")) == [(1,)]
        assert degree_support(line_spec, parse_insertion("c1[1]^2")) == []

    def test_zero_insertion_has_empty_support(self, line_spec):
        assert degree_support(line_spec, Insertion(())) == []

    def test_chain_bound_for_punctual(self):
        spec = ProblemSpec(genus=0, ambient_rank=2, ranks=(2, 2))
        assert uses_chain_bound(spec)
        assert degree_support(spec, parse_insertion("c2[1]")) == [(1, 0), (1, 1)]

    def test_cap_replaces_bounds(self, golden_spec):
        assert not uses_chain_bound(golden_spec)
        assert degree_support(golden_spec, Insertion.one(), cap=9) == [(9, 9)]


class TestReduceBundleDegree:
    def test_negative_degree(self, line_spec):
        spec, insertion, shift = reduce_bundle_degree(line_spec.replace(bundle_degree=-2), Insertion.one())
        assert spec.bundle_degree == 0
        assert insertion == Insertion.monomial(ElemSym(1, 1), ElemSym(1, 1))
        assert shift == 2

    def test_zero_degree_unchanged(self, line_spec):
        insertion = parse_insertion("c1[1]")
        assert reduce_bundle_degree(line_spec, insertion) == (line_spec, insertion, 0)

    def test_positive_degree(self, line_spec):
        with pytest.raises(BundleDegreePositive):
            reduce_bundle_degree(line_spec.replace(bundle_degree=1), Insertion.one())


class TestInsertions:
    def test_power(self):
        assert parse_insertion("c1[1]^3") == Insertion.monomial(*[ElemSym(1, 1)] * 3)

    def test_insertion_power_matches_parsed_expansion(self):
        binomial = parse_insertion("c1[1] + c2[2]")
        assert binomial.power(2) == parse_insertion("c1[1]^2 + 2*c1[1]*c2[2] + c2[2]^2")
        assert binomial.power(0) == Insertion.one()
        assert Insertion.monomial(ElemSym(1, 1)).power(3) == Insertion.from_powers({ElemSym(1, 1): 3})

    def test_one_is_empty(self):
        assert parse_insertion("1") == Insertion.one()

    def test_whitespace_and_round_trip(self):
        parsed = parse_insertion(" 2 * c1 [1] * X[1] - c2[2] ")
        assert parsed.to_string() == "2*c1[1]*X[1] - c2[2]"
        assert parse_insertion(parsed.to_string()) == parsed

    def test_like_terms_merge(self):
        assert parse_insertion("c1[1] + c1[1] - 2*c1[1]").is_zero

    def test_leading_minus(self):
        assert parse_insertion("-c1[1]").terms[0].coefficient == -1

    @pytest.mark.parametrize("text", ["", "c1[1", "c1[1]^", "q1", "c[1]", "X1", "c1[1] +"])
    def test_malformed(self, text):
        with pytest.raises(InsertionParseError) as info:
            parse_insertion(text)
        assert info.value.code == "INSERTION_PARSE"

    def test_degree(self, two_step_spec):
        insertion = parse_insertion("c1[1]*X[1]")
        assert validate_insertion(two_step_spec, insertion) == 1 + 2
        assert EulerCross(2).degree(two_step_spec) == 6

    def test_out_of_range(self, two_step_spec):
        with pytest.raises(InvalidInsertion):
            validate_insertion(two_step_spec, parse_insertion("c2[1]"))
        with pytest.raises(InvalidInsertion):
            validate_insertion(two_step_spec, parse_insertion("X[3]"))

    def test_inhomogeneous(self, two_step_spec):
        with pytest.raises(InvalidInsertion):
            validate_insertion(two_step_spec, parse_insertion("c1[1] + c2[2]"))


class TestGeneratingPolynomial:
    def test_arithmetic(self):
        q1 = GeneratingPolynomial.monomial((1, 0))
        q2 = GeneratingPolynomial.monomial((0, 1))
        square = (q1 + q2) ** 2
        assert square.coefficient((1, 1)) == 2
        assert (square - q1 * q1).degrees() == [(0, 2), (1, 1)]

    def test_equality_ignores_metadata(self):
        a = GeneratingPolynomial(1, {(2,): 3}, {"seed": 1})
        b = GeneratingPolynomial(1, {(2,): 3}, {"seed": 2})
        assert a == b

    def test_zero_terms_dropped(self):
        assert GeneratingPolynomial(1, {(0,): 0, (1,): 5}).degrees() == [(1,)]

    def test_shift_and_serialization(self):
        poly = GeneratingPolynomial(2, {(1, 2): 13060694016}).shift((-1, 0))
        payload = poly.to_dict()
        assert payload["terms"] == [{"degree": [0, 2], "coefficient": "13060694016"}]

    def test_rows(self):
        rows = GeneratingPolynomial(2, {(1, 0): 4}).to_rows()
        assert rows == [["d1", "d2", "coefficient"], ["1", "0", "4"]]
