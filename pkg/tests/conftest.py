import random
from pathlib import Path

import pytest

from broadcast_indep.graph_core import Graph, is_connected, parse_graph6

DATA = Path(__file__).parent / "data"


def random_connected_graph(rng: random.Random, n: int, p: float | None = None) -> Graph:
    """Labelled G(n, p) conditioned on connectivity by rejection."""
    p = rng.uniform(0.2, 0.8) if p is None else p
    while True:
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        g = Graph.from_edges(n, edges)
        if is_connected(g):
            return g


def load_corpus() -> list[Graph]:
    lines = (DATA / "connected_upto8.g6").read_text().split()
    return [parse_graph6(line) for line in lines]


@pytest.fixture(scope="session")
def corpus() -> list[Graph]:
    return load_corpus()


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
