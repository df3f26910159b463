from __future__ import annotations

import json
import random
import sys

import pytest
from hypothesis import strategies as st

from graphbraid.cube_complex import build_config_complex
from graphbraid.graph_core import Graph, star_graph, subdivide_for, tripod_subdivided, two_tripods
from graphbraid.raag import build_delta

from oracles import FROZEN


@pytest.fixture(scope="session")
def frozen():
    return json.loads(FROZEN.read_text())


@pytest.fixture(scope="session")
def hexagon():
    return build_config_complex(star_graph(3), 2)


@pytest.fixture(scope="session")
def tripod():
    return tripod_subdivided()


@pytest.fixture(scope="session")
def tripod_complex(tripod):
    return build_config_complex(tripod, 3)


@pytest.fixture(scope="session")
def tripod_delta(tripod):
    return build_delta(tripod)


@pytest.fixture(scope="session")
def big_graph():
    """Two tripods subdivided for six tokens."""
    return subdivide_for(two_tripods(), 6)[0]


def random_graph(rng: random.Random, max_vertices: int = 8, max_edges: int | None = None) -> Graph:
    v = rng.randint(1, max_vertices)
    pairs = [(a, b) for a in range(v) for b in range(a + 1, v)]
    rng.shuffle(pairs)
    k = rng.randint(0, len(pairs) if max_edges is None else min(max_edges, len(pairs)))
    return Graph(v, tuple(sorted(pairs[:k])))


@st.composite
def graphs(draw, max_vertices: int = 8, max_edges: int | None = None):
    v = draw(st.integers(1, max_vertices))
    pairs = [(a, b) for a in range(v) for b in range(a + 1, v)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True,
                           max_size=len(pairs) if max_edges is None else max_edges)) if pairs else []
    return Graph(v, tuple(sorted(chosen)))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.summary_lines():
        terminalreporter.write_line(line)
