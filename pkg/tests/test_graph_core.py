from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings

from graphbraid.graph_core import (
    DisconnectedError,
    Graph,
    GraphFormatError,
    apply_plan,
    cycle_graph,
    degree_profile,
    edge_distance,
    format_graph,
    is_sufficiently_subdivided,
    parse_graph,
    star_graph,
    subdivide_for,
    tripod_chain,
    tripod_subdivided,
    two_tripods,
)

from conftest import graphs, random_graph


def test_parse_tripod():
    g = parse_graph("n_vertices 4\nedge 0 1\nedge 0 2\nedge 0 3\n")
    assert g.vertex_count == 4 and g.edge_count == 3
    assert [g.tail(i) for i in range(3)] == [0, 0, 0]
    assert degree_profile(g).m3 == 1


def test_parse_single_vertex_and_star():
    assert parse_graph("n_vertices 1").edge_count == 0
    g = parse_graph("# the star\nn_vertices 5\nedge 0 1\nedge 0 2\nedge 0 3\nedge 0 4  # last\n")
    assert g == Graph(5, ((0, 1), (0, 2), (0, 3), (0, 4)))


def test_parse_labels_round_trip():
    text = "n_vertices 3\nedge 0 1\nedge 1 2\nvlabel 1 mid\nelabel 0 x\nelabel 1 y\n"
    g = parse_graph(text)
    assert g.edge_label(1) == "y" and g.vertex_label(1) == "mid"
    assert parse_graph(format_graph(g)) == g


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("n_vertices 3\nedge 1 1\n", 2, "self-loop"),
        ("n_vertices 3\nedge 0 1\nedge 0 1\n", 3, "duplicate"),
        ("n_vertices 3\nedge 0 7\n", 2, "out of range"),
        ("n_vertices 3\nedge 0\n", 2, "expected"),
        ("edge 0 1\n", 1, "n_vertices"),
        ("n_vertices 3\nedge 0 x\n", 2, "integer"),
        ("n_vertices 3\nwibble 1\n", 2, "unknown"),
        ("n_vertices 3\nedge 2 1\n", 2, "u < v"),
        ("n_vertices 2\nedge 0 1\nelabel 3 q\n", 3, "out of range"),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert info.value.lineno == lineno
    assert fragment in str(info.value)


def test_graph_invariants_enforced():
    with pytest.raises(GraphFormatError):
        Graph(2, ((0, 0),))
    with pytest.raises(GraphFormatError):
        Graph(2, ((0, 1), (1, 0)))
    with pytest.raises(GraphFormatError):
        Graph(2, ((0, 1),), orientation=((0, 1), (0, 1)))
    with pytest.raises(GraphFormatError):
        Graph(3, ((0, 1), (1, 2)), edge_labels={0: "x", 1: "x"})


def test_orientation_override():
    g = Graph(2, ((0, 1),), orientation=((1, 0),))
    assert (g.tail(0), g.head(0)) == (1, 0)


@pytest.mark.parametrize("k, m, m3", [(3, 1, 1), (4, 1, 0), (5, 1, 0)])
def test_star_profiles(k, m, m3):
    p = degree_profile(star_graph(k))
    assert (p.m, p.m3, p.essential_vertices) == (m, m3, (0,))
    assert star_graph(k).vertex_count == k + 1


def test_star_needs_three_leaves():
    with pytest.raises(ValueError):
        star_graph(2)


def test_tripod_subdivided_layout(tripod):
    assert tripod.vertex_count == 7 and tripod.edge_count == 6
    assert [tripod.edge_label(i) for i in range(6)] == list("abcdef")
    p = degree_profile(tripod)
    assert (p.m, p.m3, p.essential_vertices) == (1, 1, (0,))


def test_two_tripods_profile():
    # degree count by hand: both centers have degree 3, joined leaves degree 2
    p = degree_profile(two_tripods())
    assert (p.m, p.m3, p.threshold) == (2, 2, 6)
    assert degree_profile(tripod_chain(3)).m == 3


def test_edge_distance(tripod):
    assert edge_distance(tripod, 0, 4) == 2
    assert edge_distance(tripod, 3, 3) == 0
    assert edge_distance(star_graph(4), 1, 2) == 2
    with pytest.raises(DisconnectedError):
        edge_distance(Graph(3, ((0, 1),)), 0, 2)


@given(graphs(max_vertices=7))
@settings(max_examples=60, deadline=None)
def test_edge_distance_is_a_metric(g):
    for u, v, w in itertools.product(range(g.vertex_count), repeat=3):
        try:
            duv, dvw, duw = edge_distance(g, u, v), edge_distance(g, v, w), edge_distance(g, u, w)
        except DisconnectedError:
            continue
        assert duv == edge_distance(g, v, u)
        assert duw <= duv + dvw
        assert (duv == 0) == (u == v)


def test_subdivision_predicate_examples(tripod):
    assert is_sufficiently_subdivided(star_graph(3), 2)[0]
    ok, viol = is_sufficiently_subdivided(star_graph(3), 3)
    assert not ok and viol[0].kind == "distance" and viol[0].actual == 1
    assert is_sufficiently_subdivided(tripod, 3)[0]


def test_subdivide_examples(tripod):
    h, plan = subdivide_for(star_graph(3), 3)
    assert plan.per_edge_pieces == (2, 2, 2)
    assert h.vertex_count == 7 and degree_profile(h).m3 == 1
    h, plan = subdivide_for(star_graph(4), 2)
    assert plan.is_identity and h == star_graph(4)
    h, plan = subdivide_for(cycle_graph(3), 2)
    assert is_sufficiently_subdivided(h, 2)[0]


def test_apply_plan_labels():
    h = apply_plan(star_graph(3), subdivide_for(star_graph(3), 3)[1])
    assert [h.edge_label(i) for i in range(h.edge_count)] == ["a.1", "a.2", "b.1", "b.2", "c.1", "c.2"]


def test_subdivide_property_seeded():
    rng = random.Random(20240611)
    for _ in range(150):
        g = random_graph(rng, max_vertices=8)
        n = rng.randint(1, 5)
        if g.edge_count == 0 and g.vertex_count < n:
            with pytest.raises(ValueError):
                subdivide_for(g, n)
            continue
        h, plan = subdivide_for(g, n)
        assert is_sufficiently_subdivided(h, n)[0], (g, n, plan)
        assert all(1 <= p <= n for p in plan.per_edge_pieces)
        pg, ph = degree_profile(g), degree_profile(h)
        assert (pg.m, pg.m3) == (ph.m, ph.m3)


@given(graphs(max_vertices=8, max_edges=12))
@settings(max_examples=40, deadline=None)
def test_subdivide_property_hypothesis(g):
    for n in range(1, 6):
        if g.edge_count == 0 and g.vertex_count < n:
            continue
        h, _ = subdivide_for(g, n)
        assert is_sufficiently_subdivided(h, n)[0]
