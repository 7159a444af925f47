import pytest

from lllab.graphs import (GraphError, SimpleGraph, complete_graph, cycle_graph,
                          path_graph, random_graph_max_degree,
                          random_regular_bipartite)


def test_basic_construction_and_dedupe():
    G = SimpleGraph(3, [(0, 1), (1, 0), (1, 2)])
    assert G.edges == [(0, 1), (1, 2)]
    assert G.adj[1] == (0, 2)
    with pytest.raises(GraphError):
        SimpleGraph(2, [(0, 0)])
    with pytest.raises(GraphError):
        SimpleGraph(2, [(0, 5)])


def test_girth():
    assert path_graph(5).girth() is None
    assert cycle_graph(5).girth() == 5
    assert cycle_graph(8).girth() == 8
    assert complete_graph(4).girth() == 3
    two_cycles = SimpleGraph(7, [(0, 1), (1, 2), (2, 0),
                                 (3, 4), (4, 5), (5, 6), (6, 3)])
    assert two_cycles.girth() == 3


def test_triangle_detection():
    assert complete_graph(3).has_triangle()
    assert not cycle_graph(4).has_triangle()
    assert not random_regular_bipartite(30, 5, seed=1).has_triangle()


def test_random_regular_bipartite_properties():
    for seed in range(4):
        G = random_regular_bipartite(50, 8, seed=seed)
        assert G.n == 100
        assert G.is_regular(8)
        assert not G.has_triangle()
        # same seed, same graph
        again = random_regular_bipartite(50, 8, seed=seed)
        assert again.edges == G.edges
    with pytest.raises(GraphError):
        random_regular_bipartite(4, 8, seed=0)


def test_random_graph_max_degree():
    G = random_graph_max_degree(100, 5, 150, seed=2)
    assert G.max_degree() <= 5
    assert len(G.edges) == 150
    assert random_graph_max_degree(100, 5, 150, seed=2).edges == G.edges


def test_graph_json_round_trip(tmp_path):
    G = cycle_graph(6)
    path = tmp_path / "g.json"
    G.dump(path)
    H = SimpleGraph.load(path)
    assert H.n == G.n and H.edges == G.edges
