import numpy as np
import pytest

from jetmech.fields import OneFormField, field_strength_matrix, minkowski
from jetmech.lagrangian import RelativisticLagrangian, TrajectoryState


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def free_particle():
    return RelativisticLagrangian(minkowski(4))


@pytest.fixture
def charged_particle():
    """m = e = 1 in a constant field with F_12 = 1."""
    F = field_strength_matrix(4, {(1, 2): 1.0})
    return RelativisticLagrangian(minkowski(4), OneFormField.uniform_field(F))


@pytest.fixture
def gyration_start():
    return TrajectoryState(0.0, np.zeros(4), np.array([1.25, 0.75, 0.0, 0.0]))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
