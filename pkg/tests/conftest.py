from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from pagerank_steps.graph import EdgeList, build_graph

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES: list[str] = []


def random_edges(rng: np.random.Generator, n: int, mean_degree: float = 3.0,
                 dangling_fraction: float = 0.2) -> EdgeList:
    """Random directed graph with roughly ``mean_degree`` out-links per non-dangling vertex."""
    m = int(n * mean_degree)
    src = rng.integers(0, n, size=m)
    dst = rng.integers(0, n, size=m)
    dangling = rng.random(n) < dangling_fraction
    keep = ~dangling[src]
    return EdgeList.from_pairs(n, np.stack([src[keep], dst[keep]], axis=1))


def random_graph(seed: int, n: int, **kw):
    return build_graph(random_edges(np.random.default_rng(seed), n, **kw))


@st.composite
def edge_lists(draw, max_n: int = 30):
    n = draw(st.integers(1, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=4 * n))
    return EdgeList.from_pairs(n, pairs)


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
