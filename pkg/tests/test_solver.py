"""
Tests for start systems, path tracking and complete solution sets.
"""

import math

import numpy as np
import pytest

from hqvi.config import Method, Precision, SolverSettings
from hqvi.errors import EquivariantParamsDegenerate, IncompleteSolutionSet, InputError, MethodMismatch, ZeroParameter
from hqvi.models import BetheSolution, PathStatus, ProblemSpec, SignMode, SolutionSetStatus
from hqvi.solver import (
    DegenerationFamily,
    canonical_form,
    refine_solution_set,
    same_orbit,
    solve,
    start_solutions_degeneration,
    start_solutions_equivariant,
    track_path,
)
from hqvi.system import BetheSystem, sign_convert_q

RANDOM_Q = {
    1: (0.83 + 0.41j,),
    2: (0.7 + 0.35j, -0.45 + 0.9j),
    3: (0.6 + 0.5j, -0.8 + 0.3j, 0.4 - 0.9j),
}


def _degeneration_q(spec, q):
    return sign_convert_q(spec, q, SignMode.FORMULA, SignMode.DEGENERATION)


@pytest.mark.parametrize("ranks, n, expected", [
    ((1,), 2, 2),
    ((2,), 3, 3),
    ((1, 2), 3, 6),
    ((2, 3), 4, 12),
    ((3, 3), 3, 1),
    ((2, 2, 2), 2, 1),
    ((6, 7), 8, 56),
    ((1, 2, 3), 4, 24),
])
def test_start_system_sizes(ranks, n, expected):
    spec = ProblemSpec(genus=0, ambient_rank=n, ranks=ranks)
    starts = start_solutions_degeneration(spec, RANDOM_Q[spec.k])
    assert len(starts) == expected == spec.expected_orbit_count
    assert all(len(z) == spec.total_vars for z in starts)


def test_equivariant_start_points_are_nested_subsets():
    eps = (0.3, -0.2 + 0.1j, 0.5j)
    spec = ProblemSpec(genus=0, ambient_rank=3, ranks=(1, 2), equivariant_params=eps)
    starts = start_solutions_equivariant(spec)
    assert len(starts) == 6
    for z in starts:
        assert z[0] in z[1:]
        assert set(z).issubset(set(eps))


@pytest.mark.parametrize("ranks, expected", [
    ((1,), [(-1,), (1,)]),
    ((1, 1), [(-1, -1), (1, 1)]),
])
def test_equivariant_start_points_for_real_weights(ranks, expected):
    spec = ProblemSpec(genus=0, ambient_rank=2, ranks=ranks, equivariant_params=(1, -1))
    starts = start_solutions_equivariant(spec)
    assert sorted(starts, key=lambda z: z[0].real) == expected
    assert len(starts) == spec.expected_orbit_count


@pytest.mark.parametrize("n, k", [(2, 2), (3, 2), (2, 3)])
def test_punctual_chain_has_one_orbit_with_unit_J(n, k):
    spec = ProblemSpec(genus=0, ambient_rank=n, ranks=(n,) * k)
    q = RANDOM_Q[k]
    assert len(start_solutions_degeneration(spec, _degeneration_q(spec, q))) == 1
    sols = solve(spec, q, seed=6)
    assert sols.is_complete
    assert len(sols.representatives) == 1
    J = BetheSystem(spec, q, SignMode.FORMULA).eval_J_factor(sols.representatives[0])
    assert complex(J) == pytest.approx(1.0, abs=1e-8)


def test_step_limit_stops_the_path(two_step_spec):
    q_deg = _degeneration_q(two_step_spec, RANDOM_Q[2])
    family = DegenerationFamily(BetheSystem(two_step_spec, q_deg, SignMode.DEGENERATION))
    start = start_solutions_degeneration(two_step_spec, q_deg)[0]
    path = track_path(family, start, options=SolverSettings(max_steps=1))
    assert path.status == PathStatus.STEP_LIMIT_EXCEEDED
    assert not path.converged
    assert path.end is None
    assert path.steps_taken == 1


def test_step_limit_leaves_an_incomplete_set(two_step_spec):
    opts = SolverSettings(max_steps=1, retries=0)
    sols = solve(two_step_spec, RANDOM_Q[2], options=opts, seed=3, raise_on_incomplete=False)
    assert sols.status == SolutionSetStatus.INCOMPLETE
    assert not sols.is_complete
    assert sols.representatives == []
    assert sols.diagnostics["path_failures"] == 6
    with pytest.raises(IncompleteSolutionSet):
        solve(two_step_spec, RANDOM_Q[2], options=opts, seed=3)


def test_start_systems_reject_bad_parameters():
    line = ProblemSpec(genus=0, ambient_rank=2, ranks=(1,))
    with pytest.raises(ZeroParameter):
        start_solutions_degeneration(line, (0j,))
    twin = ProblemSpec(genus=0, ambient_rank=2, ranks=(1,), equivariant_params=(0.2, 0.2))
    with pytest.raises(EquivariantParamsDegenerate):
        start_solutions_equivariant(twin)


def test_quadratic_solutions(line_spec):
    sols = solve(line_spec, (4.0,), seed=3)
    assert sols.is_complete
    assert sols.solution_count == 2
    found = sorted(complex(rep.z[0]).real for rep in sols.representatives)
    assert found == pytest.approx([-2.0, 2.0], abs=1e-9)


@pytest.mark.parametrize("ranks, n", [
    ((1,), 2),
    ((2,), 3),
    ((1, 2), 3),
    ((2, 3), 4),
    ((3, 3), 3),
    ((2, 2, 2), 2),
    ((1, 2, 3), 4),
    pytest.param((6, 7), 8, marks=pytest.mark.slow),
])
def test_complete_sets_at_random_q(ranks, n):
    spec = ProblemSpec(genus=0, ambient_rank=n, ranks=ranks)
    q = RANDOM_Q[spec.k]
    sols = solve(spec, q, seed=17)
    assert sols.is_complete
    assert sols.solution_count == spec.expected_solution_count
    system = BetheSystem(spec, q, SignMode.FORMULA)
    for rep in sols.representatives:
        residual = np.linalg.norm(system.eval_system(np.array(rep.z)))
        assert residual <= 1e-9 * system.residual_tolerance_scale
    for a in range(len(sols.representatives)):
        for b in range(a + 1, len(sols.representatives)):
            assert not same_orbit(sols.representatives[a], sols.representatives[b], spec)


def test_equivariant_method_matches_expected_count():
    spec = ProblemSpec(genus=0, ambient_rank=3, ranks=(1, 2), equivariant_params=(0.31, -0.17 + 0.22j, 0.05 - 0.4j))
    sols = solve(spec, RANDOM_Q[2], method=Method.EQUIVARIANT, seed=4)
    assert sols.is_complete
    assert len(sols.representatives) == 6
    assert sols.diagnostics["method"] == "equivariant"


def test_method_mismatch(line_spec):
    with pytest.raises(MethodMismatch):
        solve(line_spec, (1.0,), method=Method.EQUIVARIANT)
    with pytest.raises(MethodMismatch):
        solve(line_spec, (1.0,), eps=(0.1, -0.3), method=Method.DEGENERATION)


def test_wrong_parameter_count(two_step_spec):
    with pytest.raises(InputError):
        solve(two_step_spec, (1.0,))


def test_same_seed_gives_identical_representatives(two_step_spec):
    first = solve(two_step_spec, RANDOM_Q[2], seed=9)
    second = solve(two_step_spec, RANDOM_Q[2], seed=9)
    assert [rep.z for rep in first.representatives] == [rep.z for rep in second.representatives]


def test_canonical_form_sorts_within_levels(two_step_spec):
    sol = BetheSolution(
        z=(0.5 + 0j, 2.0 + 0j, -1.0 + 0j),
        residual_norm=0.0,
        min_separation=1.0,
        jacobian_condition=1.0,
        separation_tolerance=1e-8,
    )
    canonical = canonical_form(sol, two_step_spec)
    assert canonical.z == (0.5 + 0j, -1.0 + 0j, 2.0 + 0j)
    assert same_orbit(sol, canonical, two_step_spec)


def test_dd_precision_keeps_extended_coordinates(two_step_spec):
    sols = solve(two_step_spec, RANDOM_Q[2], seed=2, precision=Precision.DD)
    assert sols.diagnostics["precision"] == "dd"
    assert all(rep.z_extended is not None for rep in sols.representatives)
    assert sols.diagnostics["worst_residual"] < 1e-20


def test_refine_solution_set_marks_dd(line_spec):
    refined = refine_solution_set(solve(line_spec, (2.0 + 1.0j,), seed=5))
    assert refined.diagnostics["precision"] == "dd"
    for rep in refined.representatives:
        assert complex(rep.z_extended[0]) ** 2 == pytest.approx(2.0 + 1.0j, rel=1e-14)


def test_orbit_weight_is_product_of_factorials():
    spec = ProblemSpec(genus=0, ambient_rank=4, ranks=(2, 3))
    assert spec.orbit_weight == math.factorial(2) * math.factorial(3)
