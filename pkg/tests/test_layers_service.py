import pickle
from fractions import Fraction

import numpy as np
import pytest

from helpers import assert_within
from src.models.errors import TiesDetected
from src.models.experiment_data import Estimate
from src.models.graph_data import lattice_neighbors
from src.models.layers_data import AgeAssignment, LazyAgeSource
from src.services.graph_service import graph_service
from src.services.layers_service import layers_service


def test_layers_on_small_path():
    g = graph_service.path_graph(3)
    layers = layers_service.compute_layers(g, AgeAssignment(np.array([1, 0, 2])))
    assert layers.layers.tolist() == [2, 1, 2]
    assert layers.members(1).tolist() == [1]
    assert layers.histogram(3).tolist() == [1, 2, 0]


def test_layers_match_direct_count(rng):
    g = graph_service.erdos_renyi(200, 0.03, rng)
    ages = layers_service.sample_ages(g, rng)
    layers = layers_service.compute_layers(g, ages)
    for v in range(g.n):
        younger = sum(1 for w in g.neighbors(v) if ages.younger(w, v))
        assert layers.layer_of(v) == 1 + younger


def test_uniform_ages_give_same_layers_as_ranks(rng):
    g = graph_service.cycle_graph(20)
    ages = AgeAssignment(rng.random(20))
    ranked = AgeAssignment(ages.ranks)
    assert np.array_equal(layers_service.compute_layers(g, ages).layers,
                          layers_service.compute_layers(g, ranked).layers)


def test_ties_detected():
    g = graph_service.path_graph(3)
    with pytest.raises(TiesDetected):
        layers_service.compute_layers(g, AgeAssignment(np.array([0, 0, 1])))


def test_extract_tk_is_induced_subgraph():
    g = graph_service.path_graph(4)
    ages = AgeAssignment.from_order([1, 3, 0, 2])
    layers = layers_service.compute_layers(g, ages)
    t1 = layers_service.extract_tk(g, layers, 1)
    assert t1.vertices.tolist() == [1, 3]
    assert t1.graph.edge_count == 0
    t2 = layers_service.extract_tk(g, layers, 2)
    assert t2.vertices.tolist() == [0, 1, 3]
    assert t2.graph.edge_count == 1
    t3 = layers_service.extract_tk(g, layers, 3)
    assert t3.size == 4 and t3.graph.edge_count == 3
    assert t1.contains(3) and not t1.contains(2)


def test_extract_tk_rejects_k_zero():
    g = graph_service.path_graph(2)
    layers = layers_service.compute_layers(g, AgeAssignment.from_order([0, 1]))
    with pytest.raises(ValueError):
        layers_service.extract_tk(g, layers, 0)


def test_layer_marginal_exact():
    assert layers_service.layer_marginal(4) == Fraction(1, 5)
    assert layers_service.layer_marginal(0) == 1


def test_star_center_layer_is_uniform(rng):
    g = graph_service.star_graph(4)
    trials = 20000
    layers = [layers_service.compute_layers(g, layers_service.sample_ages(g, rng)).layer_of(0)
              for _ in range(trials)]
    counts = np.bincount(layers, minlength=6)
    for i in range(1, 6):
        assert_within(Estimate.from_count(int(counts[i]), trials), 0.2)


def test_configuration_rows():
    g = graph_service.path_graph(3)
    ages = AgeAssignment(np.array([5.0, 1.0, 9.0]))
    rows = layers_service.configuration_rows(ages, layers_service.compute_layers(g, ages))
    assert rows == [[0, 1, 2], [1, 0, 1], [2, 2, 2]]


def test_lazy_age_is_deterministic_and_keyed():
    a, b = LazyAgeSource(seed=7), LazyAgeSource(seed=7)
    p = (3, -1, 4)
    assert layers_service.lazy_age(a, p) == layers_service.lazy_age(b, p)
    assert LazyAgeSource(seed=8).age(p) != a.age(p)
    assert a.age((3, -1, 5)) != a.age(p)
    assert 0.0 <= a.normalized(p) < 1.0


def test_lazy_age_memo_and_pickle():
    src = LazyAgeSource(seed=3)
    age = src.age((1, 2))
    assert src.memo == {(1, 2): age}
    restored = pickle.loads(pickle.dumps(src))
    restored.clear()
    assert restored.age((1, 2)) == age
    plain = LazyAgeSource(seed=3, memoize=False)
    assert plain.age((1, 2)) == age and not plain.memo


def test_lattice_layer_counts_younger_neighbors():
    src = LazyAgeSource(seed=11)
    p = (2, 5)
    expected = 1 + sum(src.age(q) < src.age(p) for q in lattice_neighbors(p))
    assert layers_service.lattice_layer_index(src, p) == expected
    assert layers_service.lattice_layer_of(src, p, 4) == (expected <= 4)
    assert layers_service.lattice_layer_of(src, p, 5)


def test_tk_nested_and_first_layer_independent(rng):
    g = graph_service.erdos_renyi(300, 0.02, rng)
    layers = layers_service.compute_layers(g, layers_service.sample_ages(g, rng))
    previous = set()
    for k in range(1, 6):
        current = set(layers_service.extract_tk(g, layers, k).vertices.tolist())
        assert previous <= current
        previous = current
    assert layers_service.extract_tk(g, layers, 1).graph.edge_count == 0


def test_lazy_ages_are_uniform_on_average():
    src = LazyAgeSource(seed=21, memoize=False)
    ages = [src.normalized((x, y)) for x in range(150) for y in range(150)]
    assert_within(Estimate.from_samples(ages), 0.5)


def test_first_lattice_layer_in_the_plane():
    trials = 20_000
    hits = sum(layers_service.lattice_layer_of(LazyAgeSource(seed=s), (0, 0), 1) for s in range(trials))
    assert_within(Estimate.from_count(hits, trials), 0.2)


def test_every_point_of_the_line_is_in_t3():
    for seed in range(20):
        src = LazyAgeSource(seed=seed)
        assert all(layers_service.lattice_layer_of(src, (x,), 3) for x in range(-10, 10))
