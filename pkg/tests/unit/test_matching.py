import pytest
from hypothesis import given, strategies as st

from app.exceptions import ShapeError
from app.services.matching import BipartiteGraph, HopcroftKarp, maximum_matching
from tests.test_utils import brute_force_matching_size


def _is_matching(graph, pairs):
    us = [u for u, _ in pairs]
    vs = [v for _, v in pairs]
    return len(set(us)) == len(us) and len(set(vs)) == len(vs) and all(v in graph.adj_u[u] for u, v in pairs)


def test_perfect_matching():
    graph = BipartiteGraph(3, 3, [[0, 1], [0], [1, 2]])
    pairs = maximum_matching(graph)
    assert sorted(pairs) == [(0, 1), (1, 0), (2, 2)]


def test_matching_needs_augmenting_path():
    """Первое жадное ребро 0-0 приходится перестраивать"""
    graph = BipartiteGraph(2, 2, [[0, 1], [0]])
    pairs = maximum_matching(graph)
    assert len(pairs) == 2
    assert _is_matching(graph, pairs)


def test_hall_violation():
    graph = BipartiteGraph(3, 3, [[0], [0], [1, 2]])
    assert len(maximum_matching(graph)) == 2


def test_empty_graph():
    assert maximum_matching(BipartiteGraph(0, 0, [])) == []


def test_from_edges_deduplicates():
    graph = BipartiteGraph.from_edges(2, 2, [(0, 1), (0, 1), (1, 0)])
    assert graph.adj_u == [[1], [0]]


def test_invalid_vertex():
    with pytest.raises(ShapeError):
        BipartiteGraph(1, 1, [[1]])
    with pytest.raises(ShapeError):
        BipartiteGraph(2, 1, [[0]])


def test_solver_is_reusable():
    graph = BipartiteGraph(2, 2, [[0], [1]])
    solver = HopcroftKarp(graph)
    assert solver() == solver()


@given(
    st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 5), max_size=4, unique=True), min_size=n, max_size=n)
    )
)
def test_matching_is_maximum(adjacency):
    graph = BipartiteGraph(len(adjacency), 6, adjacency)
    pairs = maximum_matching(graph)
    assert _is_matching(graph, pairs)
    assert len(pairs) == brute_force_matching_size(len(adjacency), adjacency)
