import numpy as np
import pytest

from suspflow.roof import build_roof
from suspflow.sft import Sft

GOLDEN = [[1, 1], [1, 0]]
TWO_COMPONENTS = [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1]]
DEAD_SYMBOL = [[1, 1, 0], [1, 0, 1], [0, 0, 0]]
MIXED = [[1, 1, 0], [1, 1, 0], [0, 0, 1]]


@pytest.fixture(scope="session")
def golden():
    return build_roof(Sft.from_matrix(GOLDEN), c=2.5)


@pytest.fixture(scope="session")
def two_components():
    return build_roof(Sft.from_matrix(TWO_COMPONENTS))


@pytest.fixture(scope="session")
def dead_symbol():
    return build_roof(Sft.from_matrix(DEAD_SYMBOL))


@pytest.fixture(scope="session")
def mixed():
    return build_roof(Sft.from_matrix(MIXED))


@pytest.fixture(scope="session")
def no_111():
    return build_roof(Sft.from_forbidden_words(2, [(1, 1, 1)]))


def random_irreducible(rng, d, density=0.5):
    """Random irreducible 0/1 matrix: a random cycle plus random edges."""
    A = (rng.random((d, d)) < density).astype(np.int8)
    perm = rng.permutation(d)
    A[perm, np.roll(perm, -1)] = 1
    return A


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split()[0])):
            terminalreporter.write_line(line)
