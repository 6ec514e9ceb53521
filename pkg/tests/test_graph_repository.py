import numpy as np
import pytest

from src.models.errors import BadConfig, DuplicateEdge, IoFailure, OddDegreeSum
from src.repositories.graph_repository import GraphRepository
from src.services.graph_service import graph_service


@pytest.fixture
def repository():
    return GraphRepository()


def test_edge_list_round_trip_keeps_isolated_vertices(repository, tmp_path):
    g = graph_service.build_graph([(0, 1), (1, 2)], 5)
    path = repository.write_edge_list(g, tmp_path / "nested" / "g.txt")
    loaded = repository.read_edge_list(path)
    assert loaded.n == 5
    assert loaded.adjacency == g.adjacency


def test_edge_list_errors(repository, tmp_path):
    with pytest.raises(IoFailure):
        repository.read_edge_list(tmp_path / "missing.txt")
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2\n")
    with pytest.raises(IoFailure):
        repository.read_edge_list(bad)
    bad.write_text("0 x\n")
    with pytest.raises(IoFailure):
        repository.read_edge_list(bad)
    bad.write_text("0 1\n1 0\n")
    with pytest.raises(DuplicateEdge):
        repository.read_edge_list(bad)


def test_degree_values(repository):
    assert repository.parse_degree_values("3") == [3]
    assert repository.parse_degree_values("3,4,5") == [3, 4, 5]
    for spec in ("", "a", "3,-1"):
        with pytest.raises(BadConfig):
            repository.parse_degree_values(spec)


def test_degree_sequence_parity(repository, rng):
    for _ in range(20):
        seq = repository.degree_sequence("3,4", 11, rng)
        assert sum(seq.values) % 2 == 0
        assert set(seq.values) <= {3, 4}
    with pytest.raises(OddDegreeSum):
        repository.degree_sequence("3", 5, rng)
    with pytest.raises(BadConfig):
        repository.degree_sequence("3", 0, rng)


@pytest.mark.parametrize("spec, n, edges", [
    ("regular:3:20", 20, 30),
    ("cycle:9", 9, 9),
    ("path:4", 4, 3),
    ("star:4", 5, 4),
    ("complete:5", 5, 10),
    ("empty:3", 3, 0),
])
def test_build_specs(repository, rng, spec, n, edges):
    g = repository.build(spec, rng)
    assert g.n == n and g.edge_count == edges


def test_build_random_families(repository, rng):
    g = repository.build("mixed:3,4,5:60", rng)
    assert set(np.unique(g.degrees)) <= {3, 4, 5}
    assert repository.build("er:2.5:200", rng).n == 200


def test_build_trees_and_files(repository, rng, tmp_path):
    assert repository.build("tree:3:2", rng).n == 10
    tree = repository.tree("tree:2,3:3")
    assert tree.degree(tree.root) == 2
    assert repository.tree("counterexample:3").depth == 3
    path = repository.write_edge_list(graph_service.cycle_graph(4), tmp_path / "c4.txt")
    assert repository.build(f"file:{path}", rng).edge_count == 4


@pytest.mark.parametrize("spec", ["wheel:5", "regular:3,4:10", "regular::10", "er:x:10", "cycle",
                                  "tree:3", "tree:0:3"])
def test_build_rejects_bad_specs(repository, rng, spec):
    with pytest.raises(BadConfig):
        repository.build(spec, rng)
