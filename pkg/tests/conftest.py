"""Shared fixtures and hypothesis profiles."""
import os

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from prefspace.core.oracle import CheckParams
from prefspace.core.order import UtilityVector

hypothesis_settings.register_profile(
    "ci", max_examples=60, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.register_profile("dev", max_examples=300, deadline=None)
hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture
def params() -> CheckParams:
    """Small budgets so claim checkers stay fast in tests."""
    return CheckParams(seed=7, samples=4, epsilons=(0.1, 0.01), random_subsets=40, sweep_sample=6)


def vec(*values) -> UtilityVector:
    return UtilityVector(tuple(values))
