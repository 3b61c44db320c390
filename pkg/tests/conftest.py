import numpy as np
import pytest

from pdakit import PdaArray, verify_base_pda

# base PDA with lambda = 1 from the worked example
P4_ROWS = [
    ["*", "*", 3, 1],
    [2, "*", "*", 4],
    [1, 3, "*", "*"],
    ["*", 2, 4, "*"],
]
# MN PDA for q = 2, z = 1 and its transformed base PDA
Q_ROWS = [["*", 1], [1, "*"]]
Q_BASE_ROWS = [["*", 2], [1, "*"]]


@pytest.fixture
def p4():
    return PdaArray.from_rows(P4_ROWS)


@pytest.fixture
def base4(p4):
    return verify_base_pda(p4, 1)


@pytest.fixture
def mn_q():
    return PdaArray.from_rows(Q_ROWS)


def shuffled(array, seed):
    """Random row/column permutation plus symbol relabelling."""
    rng = np.random.default_rng(seed)
    g = array.grid[rng.permutation(array.F)][:, rng.permutation(array.K)]
    perm = np.concatenate(([0], rng.permutation(array.num_symbols) + 1))
    return PdaArray(perm[g])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
