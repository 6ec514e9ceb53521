import pytest

from src.models.path_data import BlockPosition
from src.repositories.graph_repository import GraphRepository
from src.services.oracle_service import PermutationOracle
from src.services.verification_service import (VerificationService, _block_tree, _check,
                                               verification_service)


@pytest.fixture
def small():
    return VerificationService(PermutationOracle(max_vertices=8))


def _all_ok(results):
    failed = [r for r in results if not r.ok]
    assert not failed, failed
    return results


@pytest.mark.parametrize("position, k, i", [
    (BlockPosition.SINGLE, 1, 1),
    (BlockPosition.FIRST, 2, 1),
    (BlockPosition.LAST, 2, 2),
    (BlockPosition.INTERIOR, 3, 2),
])
def test_block_tree_places_degrees(position, k, i):
    tree, got_k, got_i = _block_tree(4, 5, position)
    assert (got_k, got_i) == (k, i)
    assert tree.depth == 2 * k


def test_cheap_checks_pass(small):
    _all_ok(verification_service.claim())
    _all_ok(verification_service.smoothing())
    assert [r.check for r in _all_ok(small.lattice())] == [
        "lattice_marginal_Ai[d=2]", "lattice_marginal_display[d=2]", "lattice_bound[2..100]"]
    _all_ok(verification_service.chain())
    _all_ok(verification_service.recurrence())


def test_exact_b_checks_pass(small):
    assert len(_all_ok(small.b_exact())) > 0
    assert len(_all_ok(small.b_pairs())) == 30


def test_tree_marginals_skip_large_blocks(small):
    results = _all_ok(small.tree_marginals())
    assert 0 < len(results) < 4 * 16


def test_t2_structure(rng):
    repository = GraphRepository()
    families = [lambda r: repository.build("regular:3:30", r), lambda r: repository.build("cycle:8", r)]
    result, = verification_service.t2_structure(families, 10, rng)
    assert result.ok and result.to_row() == ["T2_forest[10x2]", "0", "0", True]


def test_failed_check_is_reported():
    result = _check("demo", 1, 2)
    assert not result.ok
    assert result.to_row() == ["demo", "1", "2", False]


def test_lattice_correlation_skips_large_unions(small):
    result, = _all_ok(small.lattice_correlation())
    assert result.check == "lattice_correlation[k=1]"
    assert result.expected == ">= 1/2" and result.observed == "1/2"


@pytest.mark.slow
def test_lattice_oracle_in_three_dimensions():
    results = _all_ok(verification_service.lattice())
    assert "lattice_marginal_Ai[d=3]" in [r.check for r in results]


@pytest.mark.slow
def test_overlapping_blocks_are_positively_correlated():
    results = _all_ok(verification_service.lattice_correlation())
    assert [r.check for r in results] == ["lattice_correlation[k=1]", "lattice_correlation[k=2]"]


@pytest.mark.slow
def test_full_suite(rng):
    repository = GraphRepository()
    families = [lambda r: repository.build("mixed:3,4,5:60", r)]
    _all_ok(verification_service.run_all(families, 20, rng))
