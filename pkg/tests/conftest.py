import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coxtool.diagram import INF, CoxeterMatrix  # noqa: E402


def mk(names, *edges, default=2):
    """Matrix from generator names (a string of single letters or a list) and (x, y, m) edges."""
    if isinstance(names, str):
        names = list(names) if " " not in names else names.split()
    return CoxeterMatrix.from_edges(names, edges, default=default)


@pytest.fixture
def A2():
    return mk("ab", ("a", "b", 3))


@pytest.fixture
def C2():
    return mk("ab", ("a", "b", 4))


@pytest.fixture
def s_times_A2():
    return mk("sab", ("a", "b", 3))


@pytest.fixture
def inf_dihedral():
    return mk("ab", ("a", "b", INF))


def with_s(M: CoxeterMatrix, infinity=(), s="s") -> CoxeterMatrix:
    """Add a generator s commuting with M except for infinite labels to ``infinity``."""
    edges = [(x, y, m) for x, y, m in M.edges()] + [(s, u, INF) for u in infinity]
    return CoxeterMatrix.from_edges([s, *M.names], edges)


def conjugates(G, ids):
    """Ids of all W-conjugates of the given elements of an enumerated group."""
    return {G.mul(G.mul(G.inv(w), x), w) for w in range(len(G)) for x in ids}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
