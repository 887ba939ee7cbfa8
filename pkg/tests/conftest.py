import numpy as np
import pytest

from metricext.generate import instance_G1, instance_I1, random_instance
from metricext.operators import ExtensionContext
from metricext.space import instance_from_dict

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def i1():
    return instance_from_dict(instance_I1())


@pytest.fixture(scope="session")
def i1_ctx(i1):
    return ExtensionContext.from_instance(i1)


@pytest.fixture(scope="session")
def g1():
    return instance_from_dict(instance_G1())


def small_instances(count: int, seed: int = 0, max_n: int = 9):
    """Small random instances for the slow reference route."""
    out = []
    for k in range(count):
        rng = np.random.default_rng([seed, k])
        n = int(rng.integers(3, max_n + 1))
        x = int(rng.integers(2, n))
        dim = [None, 1, 2, 3][k % 4]
        out.append(instance_from_dict(random_instance(rng, n, x, dim)))
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
