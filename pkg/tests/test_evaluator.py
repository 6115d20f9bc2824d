"""
Tests for point evaluation of the main formula.
"""

import pytest

from hqvi.core import parse_insertion
from hqvi.errors import InputError
from hqvi.evaluator import (
    complex_power,
    elementary_symmetric,
    eval_insertion,
    eval_point,
    eval_point_limit,
    extrapolate_to_nonequivariant,
    genus_shift_check,
)
from hqvi.models import BetheSolution, ProblemSpec
from hqvi.oracles import oracle_quot_k1
from hqvi.solver import solve


def test_elementary_symmetric():
    assert elementary_symmetric([1, 2, 3]) == [1, 6, 11, 6]
    assert elementary_symmetric([]) == [1]


def test_complex_power_handles_negative_exponents():
    assert complex_power(2, 10) == 1024
    assert complex_power(2.0, -3) == pytest.approx(0.125)
    assert complex_power(1j, 4) == pytest.approx(1)


def test_eval_insertion_reads_levels_and_epsilon():
    spec = ProblemSpec(genus=0, ambient_rank=2, ranks=(1,), equivariant_params=(0.5, -0.25))
    sol = BetheSolution(z=(2.0 + 0j,), residual_norm=0.0, min_separation=1.0, jacobian_condition=1.0)
    assert eval_insertion(parse_insertion("c1[1]^2"), sol, spec) == pytest.approx(4.0)
    assert eval_insertion(parse_insertion("X[1]"), sol, spec) == pytest.approx((2.0 - 0.5) * (2.0 + 0.25))
    assert eval_insertion(parse_insertion("3*c1[1] + 1"), sol, spec) == pytest.approx(7.0)


@pytest.mark.parametrize("genus, n, r, text, m", [
    (0, 2, 1, "c1[1]^3", (3,)),
    (1, 3, 1, "c1[1]^3", (3,)),
    (2, 3, 2, "c1[1]^2*c2[1]", (2, 1)),
    (0, 4, 2, "c2[1]^2", (0, 2)),
])
def test_single_level_point_value_matches_closed_form(genus, n, r, text, m):
    spec = ProblemSpec(genus=genus, ambient_rank=n, ranks=(r,))
    q = (0.9 * complex(0.6, 0.8),)
    sols = solve(spec, q, seed=21)
    value = eval_point(spec, parse_insertion(text), sols).value
    expected = oracle_quot_k1(genus, n, r, m, q[0])
    assert value == pytest.approx(expected, rel=1e-8, abs=1e-9)


def test_line_on_p1_point_value_is_q(line_spec):
    q = (0.4 - 1.1j,)
    sols = solve(line_spec, q, seed=1)
    point = eval_point(line_spec, parse_insertion("c1[1]^3"), sols)
    assert point.value == pytest.approx(q[0], rel=1e-10)
    assert point.solution_count_used == 2


def test_genus_shift_check(two_step_spec):
    sols = solve(two_step_spec, (0.7 + 0.2j, -0.5 + 0.6j), seed=8)
    lhs, rhs = genus_shift_check(two_step_spec, parse_insertion("c1[1]"), sols)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_high_genus_uses_log_power_sum(line_spec):
    spec = line_spec.replace(genus=30)
    q = (0.8 + 0.3j,)
    sols = solve(spec, q, seed=6)
    value = eval_point(spec, parse_insertion("c1[1]"), sols).value
    assert value == pytest.approx(oracle_quot_k1(30, 2, 1, (1,), q[0]), rel=1e-8)


def test_extrapolation_recovers_constant_term():
    scales = [1.0, 0.5, 0.25]
    values = [3 + 2 * s + s * s for s in scales]
    assert extrapolate_to_nonequivariant(values, scales) == pytest.approx(3.0)
    with pytest.raises(InputError):
        extrapolate_to_nonequivariant([1.0], [1.0, 0.5])


def test_equivariant_limit_matches_non_equivariant(line_spec):
    q = (0.6 + 0.5j,)
    limit = eval_point_limit(line_spec, parse_insertion("c1[1]^3"), q, (0.2, -0.13 + 0.05j), seed=3)
    assert limit.value == pytest.approx(q[0], rel=1e-6)
    assert limit.eps == (0j, 0j)
