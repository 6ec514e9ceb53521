import math

import networkx as nx
import numpy as np
import pytest

from helpers import assert_within
from src.models.errors import (AttemptsExhausted, DepthZero, DuplicateEdge, EndpointOutOfRange,
                               OddDegreeSum, SelfLoop)
from src.models.experiment_data import Estimate
from src.models.graph_data import DegreeSequence, Graph, RootedTree
from src.services.graph_service import counterexample_levels, graph_service


def test_build_graph_sorted_symmetric_adjacency():
    g = graph_service.build_graph([(2, 0), (0, 1), (3, 1)], 4)
    assert g.adjacency == ((1, 2), (0, 3), (0,), (1,))
    assert g.edge_count == 3
    assert g.has_edge(1, 3) and g.has_edge(3, 1)
    assert g.edges().tolist() == [[0, 1], [0, 2], [1, 3]]


@pytest.mark.parametrize("edges, error", [
    ([(0, 1), (1, 0)], DuplicateEdge),
    ([(1, 1)], SelfLoop),
    ([(0, 4)], EndpointOutOfRange),
    ([(-1, 2)], EndpointOutOfRange),
])
def test_build_graph_rejects_invalid_edges(edges, error):
    with pytest.raises(error):
        graph_service.build_graph(edges, 4)


def test_empty_graph_has_isolated_vertices():
    g = Graph.empty(3)
    assert g.edge_count == 0
    assert g.adjacency == ((), (), ())
    assert graph_service.connected_components(g)[1].tolist() == [1, 1, 1]


def test_spherically_symmetric_tree_levels_and_nominal_degrees():
    t = graph_service.generate_spherically_symmetric_tree(lambda r: 3, 3)
    assert t.graph.n == 1 + 3 + 6 + 12
    assert t.depth == 3
    assert len(t.vertices_at_level(3)) == 12
    leaf = int(t.vertices_at_level(3)[0])
    assert t.graph.degree(leaf) == 1
    assert t.degree(leaf) == 3
    assert t.root_path(leaf)[0] == t.root
    assert [t.level[v] for v in t.root_path(leaf)] == [0, 1, 2, 3]


def test_tree_levels_match_bfs_distance():
    t = graph_service.generate_spherically_symmetric_tree(lambda r: [2, 4][r % 2], 4)
    dist = graph_service.bfs_distance(t.graph, t.root)
    assert np.array_equal(dist.astype(int), t.level)
    rebuilt = RootedTree.from_graph(t.graph, t.root)
    assert np.array_equal(rebuilt.parent, t.parent)


def test_tree_depth_zero_rejected():
    with pytest.raises(DepthZero):
        graph_service.generate_spherically_symmetric_tree(lambda r: 3, 0)


def test_counterexample_levels():
    assert counterexample_levels(10 ** 5) == [16, 65536]
    assert counterexample_levels(15) == []


def test_counterexample_tree_special_level_degree():
    t = graph_service.counterexample_tree(16)
    assert t.degree(t.root) == 2
    level = t.vertices_at_level(16)
    assert len(level) == 2 ** 16
    assert t.degree(int(level[0])) == 2 ** 16 + 1
    assert t.degree(int(t.vertices_at_level(15)[0])) == 3


def test_configuration_multigraph_preserves_degrees(rng):
    seq = DegreeSequence((5, 3, 3, 2, 2, 1))
    mg = graph_service.configuration_multigraph(seq, rng)
    assert sorted(mg.degrees.tolist(), reverse=True) == list(seq.values)
    assert mg.edge_count * 2 == sum(seq.values)


def test_configuration_pairing_law_on_two_vertices(rng):
    seq = DegreeSequence((2, 2))
    draws = [graph_service.configuration_multigraph(seq, rng) for _ in range(6000)]
    loops = [mg for mg in draws if mg.loop_count]
    assert all(mg.multiplicities == {(0, 0): 1, (1, 1): 1} for mg in loops)
    doubles = [mg for mg in draws if not mg.loop_count]
    assert all(mg.multiplicities == {(0, 1): 2} for mg in doubles)
    assert_within(Estimate.from_count(len(doubles), len(draws)), 2 / 3)


def test_simple_acceptance_rate_for_cubic_sequences(rng):
    seq = DegreeSequence.regular(3, 1000)
    attempts = [graph_service.simple_graph_with_attempts(seq, rng)[1] for _ in range(400)]
    assert_within(Estimate.from_samples(attempts), math.exp(2))


def test_odd_degree_sum_rejected():
    with pytest.raises(OddDegreeSum):
        DegreeSequence((3, 3, 3))


def test_simple_graph_from_sequence_is_regular(rng):
    g = graph_service.simple_graph_from_sequence(DegreeSequence.regular(3, 100), rng)
    assert g.n == 100
    assert (g.degrees == 3).all()
    g.assert_valid()


def test_simple_graph_attempts_exhausted(rng):
    with pytest.raises(AttemptsExhausted):
        graph_service.simple_graph_from_sequence(DegreeSequence((3, 3)), rng, max_attempts=5)


def test_erdos_renyi_extremes(rng):
    assert graph_service.erdos_renyi(10, 0.0, rng).edge_count == 0
    assert graph_service.erdos_renyi(10, 1.0, rng).edge_count == 45
    with pytest.raises(ValueError):
        graph_service.erdos_renyi(10, 1.5, rng)


def test_components_match_networkx(rng):
    g = graph_service.erdos_renyi(300, 1.2 / 300, rng)
    labels, sizes = graph_service.connected_components(g)
    expected = sorted((len(c) for c in nx.connected_components(g.to_networkx())), reverse=True)
    assert sorted(sizes.tolist(), reverse=True) == expected
    assert graph_service.largest_component_size(g) == expected[0]
    for u, v in g.edges():
        assert labels[u] == labels[v]


def test_bfs_distance_matches_networkx(rng):
    g = graph_service.erdos_renyi(200, 2.0 / 200, rng)
    dist = graph_service.bfs_distance(g, 0)
    lengths = nx.single_source_shortest_path_length(g.to_networkx(), 0)
    for v in range(g.n):
        if v in lengths:
            assert dist[v] == lengths[v]
        else:
            assert math.isinf(dist[v])


def test_ball_and_ball_is_tree_on_cycle():
    g = graph_service.cycle_graph(30)
    assert graph_service.ball(g, 0, 2) == [0, 1, 2, 28, 29]
    assert graph_service.ball_is_tree(g, 0, 2)
    assert not graph_service.ball_is_tree(g, 0, 15)


def test_distant_independent_set_is_greedy_and_spread():
    g = graph_service.cycle_graph(30)
    chosen = graph_service.distant_independent_set(g, 5, 2)
    assert chosen == [0, 5, 10, 15, 20, 25]
    for i, u in enumerate(chosen):
        dist = graph_service.bfs_distance(g, u)
        assert all(dist[w] >= 5 for w in chosen[i + 1:])


def test_star_and_complete_graphs():
    star = graph_service.star_graph(4)
    assert star.degree(0) == 4 and star.n == 5
    assert graph_service.complete_graph(5).edge_count == 10
