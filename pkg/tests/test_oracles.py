"""
Tests for the closed-form reference values.
"""

import pytest

from hqvi.core import parse_insertion
from hqvi.errors import BundleDegreePositive, HypothesisNotMet, InputError
from hqvi.interpolate import compute
from hqvi.models import ElemSym, GeneratingPolynomial, Insertion, ProblemSpec
from hqvi.oracles import (
    maximal_subsheaf_count,
    oracle_maximal_subsheaf_factor,
    oracle_points,
    oracle_points_segre,
    oracle_quot_k1,
    oracle_quot_k1_coefficient,
    oracle_quot_k1_polynomial,
    oracle_two_step,
    points_insertion,
    segre_class,
    segre_insertion,
    two_step_degree,
    two_step_insertion,
    two_step_solutions,
)

GOLDEN_COEFFS = {(10, 8): 6 ** 13, (9, 9): 20 * 6 ** 13, (8, 10): 6 ** 13}


class TestTwoStep:
    def test_golden_values(self):
        assert oracle_two_step(13, 3, 0, ()).coeffs == GOLDEN_COEFFS

    def test_genus_zero_binomial(self):
        assert oracle_two_step(0, 3, 4, (1, 0)).coeffs == {(1, 0): 2}

    def test_non_integral_degree_is_zero(self):
        assert two_step_degree(1, 3, 1, ()) is None
        assert oracle_two_step(1, 3, 1, ()).is_zero

    def test_requires_rank_three(self):
        with pytest.raises(InputError):
            oracle_two_step(0, 2, 1, ())

    def test_insertion_shape(self):
        insertion = two_step_insertion(4, 2, (1, 0, 3))
        assert insertion.to_string() == Insertion.from_powers(
            {ElemSym(1, 1): 2, ElemSym(1, 2): 1, ElemSym(3, 2): 3}
        ).to_string()

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_explicit_solution_count(self, n):
        solutions = two_step_solutions(n, (0.8 + 0.1j, -0.3 + 0.7j))
        assert len(solutions) == n * (n - 1)
        assert all(len(z) == n for z, _ in solutions)


class TestPunctual:
    def test_alpha_products(self):
        assert oracle_points(2, 2, {(2, 1): 1}).coeffs == {(1, 0): 1, (1, 1): 1}
        assert oracle_points(2, 2, {(2, 2): 1}).coeffs == {(1, 1): 1}
        squared = oracle_points(3, 1, {(3, 1): 2})
        assert squared == GeneratingPolynomial.monomial((2,))

    def test_sub_top_class_vanishes(self):
        assert oracle_points(3, 2, {(1, 1): 1, (3, 2): 2}).is_zero

    def test_empty_insertion_is_one(self):
        assert oracle_points(2, 3, {}) == GeneratingPolynomial.one(3)

    def test_out_of_range(self):
        with pytest.raises(InputError):
            oracle_points(2, 2, {(3, 1): 1})
        with pytest.raises(InputError):
            oracle_points(2, 2, {(1, 3): 1})

    def test_points_insertion(self):
        assert points_insertion({(2, 1): 2}).to_string() == Insertion.from_powers({ElemSym(2, 1): 2}).to_string()


class TestPunctualSegre:
    def test_segre_classes_are_complete_homogeneous(self):
        assert segre_class(2, 1, 1) == parse_insertion("c1[1]")
        assert segre_class(2, 1, 2) == parse_insertion("c1[1]^2 - c2[1]")
        assert segre_class(2, 2, 4) == parse_insertion("c1[2]^4 - 3*c1[2]^2*c2[2] + c2[2]^2")
        assert segre_class(3, 1, 0) == Insertion.one()

    def test_product_over_levels(self):
        assert segre_insertion(2, (2, 1)) == parse_insertion("c1[1]^2*c1[2] - c2[1]*c1[2]")

    def test_coefficients_of_the_generating_product(self):
        assert oracle_points_segre(3, 1, (3,)).coeffs == {(1,): 1}
        assert oracle_points_segre(3, 2, (3, 3)).coeffs == {(2, 1): 1, (2, 2): 1}
        assert oracle_points_segre(2, 2, (2, 0)).coeffs == {(1, 0): -1, (1, 1): -1}
        assert oracle_points_segre(2, 2, (4, 0)).coeffs == {(2, 0): 1, (2, 1): 2, (2, 2): 1}

    def test_degree_not_divisible_by_rank_vanishes(self):
        assert oracle_points_segre(2, 2, (1, 1)).is_zero
        assert oracle_points_segre(3, 1, (4,)).is_zero

    def test_bad_degrees(self):
        with pytest.raises(InputError):
            oracle_points_segre(2, 2, (2,))
        with pytest.raises(InputError):
            oracle_points_segre(2, 1, (-2,))
        with pytest.raises(InputError):
            segre_class(2, 1, -1)

    @pytest.mark.parametrize("n, degrees", [(2, (2, 0)), (2, (0, 2)), (3, (3,))])
    def test_pipeline_matches_segre_product(self, n, degrees, options):
        spec = ProblemSpec(genus=1, ambient_rank=n, ranks=(n,) * len(degrees))
        expected = oracle_points_segre(n, len(degrees), degrees)
        assert compute(spec, segre_insertion(n, degrees), options) == expected

    @pytest.mark.slow
    @pytest.mark.parametrize("g", [0, 3])
    def test_pipeline_segre_product_ignores_genus(self, g, options):
        spec = ProblemSpec(genus=g, ambient_rank=2, ranks=(2, 2))
        insertion = parse_insertion("c1[1]^2*c1[2]^2 - c1[1]^2*c2[2] - c2[1]*c1[2]^2 + c2[1]*c2[2]")
        assert insertion == segre_insertion(2, (2, 2))
        assert compute(spec, insertion, options).coeffs == {(2, 1): 1, (2, 2): 1}


class TestPunctualThreeLevels:
    @pytest.mark.slow
    def test_pipeline_matches_alpha_product(self, options):
        exponents = {(3, 1): 1, (3, 3): 1}
        spec = ProblemSpec(genus=4, ambient_rank=3, ranks=(3, 3, 3))
        expected = oracle_points(3, 3, exponents)
        assert expected.coeffs == {(2, 1, 1): 1, (2, 2, 1): 1, (2, 2, 2): 1}
        assert compute(spec, points_insertion(exponents), options) == expected


class TestSingleLevel:
    @pytest.mark.parametrize("d", [0, 1, 2, 3])
    def test_line_on_p1(self, d):
        assert oracle_quot_k1_coefficient(0, 2, 1, (2 * d + 1,)) == (d, 1)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_hyperplane_power_on_projective_space(self, n):
        assert oracle_quot_k1_coefficient(0, n, 1, (n - 1,)) == (0, 1)

    def test_point_value_is_monomial(self):
        q = 0.7 + 0.4j
        assert oracle_quot_k1(0, 2, 1, (3,), q) == pytest.approx(q, rel=1e-10)

    def test_no_matching_degree(self):
        assert oracle_quot_k1_coefficient(0, 2, 1, (2,)) == (None, 0)
        assert oracle_quot_k1_polynomial(0, 2, 1, (2,)).is_zero

    def test_maximal_subsheaf_counts(self):
        assert oracle_quot_k1_coefficient(13, 3, 2, ()) == (8, 3 ** 13)
        assert oracle_quot_k1_coefficient(13, 2, 1, (), e=-8) == (2, 2 ** 13)

    def test_positive_bundle_degree(self):
        with pytest.raises(BundleDegreePositive):
            oracle_quot_k1_coefficient(2, 2, 1, (), e=1)

    def test_exponents_longer_than_rank(self):
        with pytest.raises(InputError):
            oracle_quot_k1(0, 3, 1, (1, 2), 0.5)


class TestMaximalSubsheaf:
    @pytest.mark.parametrize("g", [3, 5, 7])
    def test_line_subbundles_of_rank_two(self, g):
        assert maximal_subsheaf_count(2, 0, 1, g) == 2 ** g

    def test_even_genus_has_no_matching_degree(self):
        with pytest.raises(HypothesisNotMet):
            maximal_subsheaf_count(2, 0, 1, 4)

    def test_low_genus(self):
        with pytest.raises(HypothesisNotMet):
            maximal_subsheaf_count(3, 0, 2, 1)

    def test_golden_factorization(self, golden_spec):
        split = oracle_maximal_subsheaf_factor(golden_spec, Insertion.one(), (10, 8))
        assert split.factor == 3 ** 13
        assert split.reduced_spec == ProblemSpec(genus=13, ambient_rank=2, ranks=(1,), bundle_degree=-8)
        assert split.reduced_degree == (2,)
        reduced = oracle_quot_k1_coefficient(13, 2, 1, (), e=-8)
        assert split.factor * reduced[1] == GOLDEN_COEFFS[(10, 8)]

    def test_last_step_must_have_dimension_zero(self, golden_spec):
        with pytest.raises(HypothesisNotMet):
            oracle_maximal_subsheaf_factor(golden_spec, Insertion.one(), (9, 9))

    def test_insertion_touching_last_level(self, golden_spec):
        with pytest.raises(HypothesisNotMet):
            oracle_maximal_subsheaf_factor(golden_spec, Insertion.monomial(ElemSym(1, 2)), (10, 8))

    def test_genus_one_rejected(self):
        spec = ProblemSpec(genus=1, ambient_rank=3, ranks=(1, 2))
        with pytest.raises(HypothesisNotMet):
            oracle_maximal_subsheaf_factor(spec, Insertion.one(), (0, 0))
