from fractions import Fraction

import pytest

from src.models.errors import TooLarge
from src.services.layers_service import layers_service
from src.services.oracle_service import PermutationOracle, permutation_oracle


def test_youngest_of_three():
    p = permutation_oracle.probability(["a", "b", "c"], lambda r: r["a"] < min(r["b"], r["c"]))
    assert p == Fraction(1, 3)


def test_duplicates_are_ignored():
    p = permutation_oracle.probability([1, 2, 1, 2], lambda r: r[1] < r[2])
    assert p == Fraction(1, 2)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_star_center_layer_law(m):
    vertices = list(range(m + 1))
    for i in range(1, m + 2):
        p = permutation_oracle.probability(
            vertices, lambda r: 1 + sum(r[w] < r[0] for w in vertices[1:]) == i)
        assert p == layers_service.layer_marginal(m)


def test_too_many_vertices():
    with pytest.raises(TooLarge):
        PermutationOracle(max_vertices=4).probability(range(5), lambda r: True)


def test_increasing_chain():
    p = permutation_oracle.probability(range(5), lambda r: all(r[i] < r[i + 1] for i in range(4)))
    assert p == Fraction(1, 120)
