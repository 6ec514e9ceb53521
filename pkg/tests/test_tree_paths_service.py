from fractions import Fraction

import pytest

from helpers import assert_within
from src.models.errors import BadConfig, DegreeTooSmall, EnumerationTooLarge
from src.models.experiment_data import Estimate
from src.models.path_data import BlockPosition, NiceConfig
from src.services.graph_service import graph_service
from src.services.layers_service import layers_service
from src.services.oracle_service import permutation_oracle
from src.services.tree_paths_service import tree_paths_service


def _tree(degree_of_level, depth):
    return graph_service.generate_spherically_symmetric_tree(degree_of_level, depth)


@pytest.mark.parametrize("x, y, position, expected", [
    (3, 3, BlockPosition.INTERIOR, Fraction(1, 3)),
    (4, 3, BlockPosition.INTERIOR, Fraction(7, 30)),
    (5, 2, BlockPosition.INTERIOR, Fraction(2, 5)),
    (2, 2, BlockPosition.INTERIOR, Fraction(1)),
    (3, 3, BlockPosition.FIRST, Fraction(1, 3)),
    (3, 4, BlockPosition.LAST, Fraction(1, 4)),
    (3, 3, BlockPosition.SINGLE, Fraction(4, 9)),
])
def test_marginal_closed_form(x, y, position, expected):
    assert tree_paths_service.marginal_Ai(x, y, position) == expected


def test_marginal_rejects_small_degree():
    with pytest.raises(DegreeTooSmall):
        tree_paths_service.marginal_Ai(1, 3, BlockPosition.INTERIOR)


@pytest.mark.parametrize("position, k, i", [
    (BlockPosition.FIRST, 2, 1),
    (BlockPosition.LAST, 2, 2),
    (BlockPosition.INTERIOR, 3, 2),
    (BlockPosition.SINGLE, 1, 1),
])
@pytest.mark.parametrize("x, y", [(2, 3), (3, 3), (4, 3), (3, 5)])
def test_marginal_matches_oracle(position, k, i, x, y):
    levels = {2 * i - 2: x, 2 * i - 1: y}
    t = _tree(lambda r: levels.get(r, 3), 2 * k)
    gamma = tree_paths_service.enumerate_root_paths(t, 2 * k - 1)[0]
    assert gamma.block_position(i) is position
    relevant, predicate = tree_paths_service.block_event(gamma, i)
    assert permutation_oracle.probability(relevant, predicate) == \
        tree_paths_service.marginal_Ai(x, y, position)


def test_interior_marginal_above_lower_bound():
    for x in range(3, 9):
        for y in range(2, 9):
            assert tree_paths_service.marginal_Ai(x, y, BlockPosition.INTERIOR) >= \
                tree_paths_service.interior_marginal_lower_bound(x, y)


def test_claim_minimum():
    assert tree_paths_service.claim_f(3, 3) == Fraction(1, 3)
    assert tree_paths_service.minimize_claim_f(50) == ((3, 3), Fraction(1, 3))
    with pytest.raises(ValueError):
        tree_paths_service.minimize_claim_f(2)


def test_enumerate_root_paths_count_and_weights(cubic_tree):
    paths = tree_paths_service.enumerate_root_paths(cubic_tree, 3)
    assert len(paths) == 12
    assert all(p.vertices[0] == cubic_tree.root for p in paths)
    assert sum(p.weight() for p in paths) == 1


def test_enumeration_cap(cubic_tree, monkeypatch):
    from src.config.settings import settings
    monkeypatch.setattr(settings.limits, "enumeration_cap", 5)
    with pytest.raises(EnumerationTooLarge):
        tree_paths_service.enumerate_root_paths(cubic_tree, 3)


def test_prob_agamma_is_product_of_blocks(cubic_tree):
    gamma = tree_paths_service.enumerate_root_paths(cubic_tree, 5)[0]
    expected = Fraction(1, 3) * Fraction(1, 3) * Fraction(1, 3)
    assert tree_paths_service.prob_Agamma(gamma) == expected


def _joint_and_product(gamma, blocks):
    events = [tree_paths_service.block_event(gamma, i) for i in blocks]
    union = [v for relevant, _ in events for v in relevant]
    joint = permutation_oracle.probability(union, lambda rank: all(p(rank) for _, p in events))
    product = Fraction(1)
    for relevant, predicate in events:
        product *= permutation_oracle.probability(relevant, predicate)
    return len(set(union)), joint, product


def test_adjacent_blocks_are_independent_on_tree(cubic_tree):
    gamma = tree_paths_service.enumerate_root_paths(cubic_tree, 5)[0]
    for blocks in ((1, 2), (2, 3)):
        size, joint, product = _joint_and_product(gamma, blocks)
        assert size == 9
        assert joint == product == Fraction(1, 9)


@pytest.mark.slow
def test_all_blocks_are_independent_on_tree(cubic_tree):
    gamma = tree_paths_service.enumerate_root_paths(cubic_tree, 3)[0]
    size, joint, product = _joint_and_product(gamma, (1, 2))
    assert size == 10
    assert joint == product == tree_paths_service.prob_Agamma(gamma) == Fraction(1, 9)


def test_good_paths_agree_with_check_good(cubic_tree, rng):
    paths = tree_paths_service.enumerate_root_paths(cubic_tree, 3)
    for _ in range(20):
        ages = layers_service.sample_ages(cubic_tree.graph, rng)
        expected = {p.vertices for p in paths if tree_paths_service.check_good(p, ages).good}
        assert set(tree_paths_service.good_paths(cubic_tree, ages, 2)) == expected


def test_good_paths_lie_in_t3(cubic_tree, rng):
    for _ in range(20):
        ages = layers_service.sample_ages(cubic_tree.graph, rng)
        layers = layers_service.compute_layers(cubic_tree.graph, ages)
        for path in tree_paths_service.good_paths(cubic_tree, ages, 3, layers):
            assert all(layers.layer_of(v) <= 3 for v in path)


def test_zk_has_unit_mean(cubic_tree, rng):
    zs = [float(tree_paths_service.sample_Zk(cubic_tree, 2, rng)) for _ in range(3000)]
    assert_within(Estimate.from_samples(zs), 1.0)
    summary = tree_paths_service.second_moment_summary(zs)
    assert 0 < summary["pz_bound"] <= 0.25
    assert 0 < summary["good_fraction"] < 1


def test_realized_zk_needs_depth(cubic_tree, rng):
    ages = layers_service.sample_ages(cubic_tree.graph, rng)
    with pytest.raises(ValueError):
        tree_paths_service.realized_Zk(cubic_tree, ages, 4)


def test_is_k_good_threshold(cubic_tree, rng):
    ages = layers_service.sample_ages(cubic_tree.graph, rng)
    z = tree_paths_service.realized_Zk(cubic_tree, ages, 2)
    assert tree_paths_service.is_k_good(cubic_tree, ages, 2) == (z >= Fraction(1, 2))


def test_b_pair_examples():
    t = _tree(lambda r: 3 if r == 0 else 4, 5)
    paths = tree_paths_service.enumerate_root_paths(t, 4)
    gamma = paths[0]
    other = next(p for p in paths if gamma.meet_index(p) == 2)
    assert tree_paths_service.prob_B_pair(t, gamma, other) == Fraction(2, 3)

    t4 = _tree(lambda r: 4, 5)
    paths = tree_paths_service.enumerate_root_paths(t4, 4)
    gamma = paths[0]
    other = next(p for p in paths if gamma.meet_index(p) == 1)
    assert tree_paths_service.prob_B_pair(t4, gamma, other) == Fraction(8, 27)
    assert tree_paths_service.prob_B_pair_display(t4, gamma, other) == Fraction(8, 27)


def test_b_pair_rejects_identical_paths(cubic_tree):
    gamma = tree_paths_service.enumerate_root_paths(cubic_tree, 3)[0]
    with pytest.raises(ValueError):
        tree_paths_service.prob_B_pair(cubic_tree, gamma, gamma)


def test_weight_through(cubic_tree):
    assert tree_paths_service.weight_through(cubic_tree, cubic_tree.root) == 1
    v = int(cubic_tree.vertices_at_level(2)[0])
    assert tree_paths_service.weight_through(cubic_tree, v) == Fraction(1, 6)


def test_growth_condition_on_regular_tree(cubic_tree):
    assert tree_paths_service.growth_condition_holds(cubic_tree, 1.0, 1.0).holds
    assert tree_paths_service.level_growth_holds(cubic_tree, 3.0, 1.0).holds
    with pytest.raises(ValueError):
        tree_paths_service.growth_condition_holds(cubic_tree, 1.0, 1.5)


def test_growth_condition_fails_on_counterexample():
    t = graph_service.counterexample_tree(16)
    report = tree_paths_service.growth_condition_holds(t, 10.0, 1.3)
    assert not report.holds
    assert t.level[report.witness] == 16
    assert not tree_paths_service.level_growth_holds(t, 10.0, 1.05).holds


def test_nice_config_validation(cubic_tree, rng):
    ages = layers_service.sample_ages(cubic_tree.graph, rng)
    with pytest.raises(BadConfig):
        tree_paths_service.check_nice_and_W(cubic_tree, ages, NiceConfig(frozenset(), 16))
    with pytest.raises(BadConfig):
        tree_paths_service.check_nice_and_W(cubic_tree, ages, NiceConfig(frozenset(), 5))


def test_nice_config_rejects_close_marks(cubic_tree, rng):
    ages = layers_service.sample_ages(cubic_tree.graph, rng)
    child = int(cubic_tree.vertices_at_level(1)[0])
    with pytest.raises(BadConfig):
        tree_paths_service.check_nice_and_W(cubic_tree, ages, NiceConfig(frozenset({0, child}), 15))


@pytest.mark.slow
def test_nice_paths_without_marks_are_all_good(rng):
    t = _tree(lambda r: 3, 16)
    ages = layers_service.sample_ages(t.graph, rng)
    outcome = tree_paths_service.check_nice_and_W(t, ages, NiceConfig(frozenset(), 15))
    assert outcome.nice_count == outcome.good_count
    assert (outcome.w_size > 0) == (outcome.good_count > 0)


@pytest.mark.slow
def test_nice_paths_with_a_marked_vertex(rng):
    t = _tree(lambda r: 3, 16)
    marked = int(t.vertices_at_level(1)[0])
    for _ in range(3):
        ages = layers_service.sample_ages(t.graph, rng)
        layers = layers_service.compute_layers(t.graph, ages)
        outcome = tree_paths_service.check_nice_and_W(t, ages, NiceConfig(frozenset({marked}), 15))
        good = tree_paths_service.good_paths(t, ages, 8, layers)
        expected = tuple(marked not in path or layers.layer_of(marked) <= 2 for path in good)
        assert outcome.nice == expected
        assert outcome.good_count == len(good) and outcome.nice_count <= outcome.good_count
        nice_vertices = {v for path, nice in zip(good, expected) if nice for v in path}
        assert outcome.w_size == len(nice_vertices)


def test_second_moment_and_nice_summaries():
    summary = tree_paths_service.second_moment_summary([1.0, 1.0])
    assert summary["mean"] == 1.0 and summary["pz_bound"] == 0.25
    nice = tree_paths_service.nice_w_summary([0, 2 ** 15], 15)
    assert nice["b_hat"] == pytest.approx(2.0)
    assert nice["nonempty"] == 0.5
