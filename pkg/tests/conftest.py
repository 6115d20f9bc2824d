"""
Shared fixtures for the hqvi test suite.
"""

import pytest

from hqvi.interpolate import ComputeOptions
from hqvi.models import ProblemSpec


@pytest.fixture
def options() -> ComputeOptions:
    """Single-threaded, fixed-seed pipeline options."""
    return ComputeOptions(seed=11, threads=1)


@pytest.fixture
def line_spec() -> ProblemSpec:
    """Quot scheme of rank-1 subsheaves of O^2 on P^1."""
    return ProblemSpec(genus=0, ambient_rank=2, ranks=(1,))


@pytest.fixture
def two_step_spec() -> ProblemSpec:
    """Chain (1, 2) in rank 3 at genus 0."""
    return ProblemSpec(genus=0, ambient_rank=3, ranks=(1, 2))


@pytest.fixture
def golden_spec() -> ProblemSpec:
    return ProblemSpec(genus=13, ambient_rank=3, ranks=(1, 2))
