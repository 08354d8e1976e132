import math

import numpy as np
import pytest

from latticepoly import HomogeneousPolynomial, OptimizerConfig, SpaceSpec

SQRT3 = math.sqrt(3.0)


@pytest.fixture
def cfg():
    return OptimizerConfig()


@pytest.fixture
def example_poly():
    """0.5 x^2 - 0.5 y^2 + (2 + sqrt3) xy on l_1^2: sup norm 1, regular norm (3 + sqrt3)/4."""
    return HomogeneousPolynomial(SpaceSpec(2, 1), 2, {(2, 0): 0.5, (0, 2): -0.5, (1, 1): 2 + SQRT3})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = list(getattr(mod, "RESULTS", []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
