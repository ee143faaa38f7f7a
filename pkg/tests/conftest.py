import random
from itertools import combinations
from pathlib import Path

import pytest

from dynrc.graph import FiniteGraph, Snapshot
from dynrc.tegio import load_teg

FIXTURES = Path(__file__).parent / "fixtures"

# The three-snapshot example graph with p_i as node i-1:
# t=1 {p1p2, p1p3}, t=2 {p1p2, p2p4}, t=3 {p1p3, p2p4, p3p4}
E1 = frozenset({(0, 1), (0, 2)})
E2 = frozenset({(0, 1), (1, 3)})
E3 = frozenset({(0, 2), (1, 3), (2, 3)})


@pytest.fixture
def fig1():
    return load_teg(FIXTURES / "fig1.teg")


@pytest.fixture
def fig1_periodic():
    return load_teg(FIXTURES / "fig1-periodic.teg")


def random_finite_graph(rng: random.Random, n: int, T: int, density: float) -> FiniteGraph:
    pairs = list(combinations(range(n), 2))
    snaps = tuple(Snapshot(t, frozenset(e for e in pairs if rng.random() < density)) for t in range(T))
    return FiniteGraph(n, snaps)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.REPORT):
        terminalreporter.write_line(module.REPORT[n])
