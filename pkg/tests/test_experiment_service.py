import math

import pytest

from src.models.errors import InvalidConfig, UnknownExperiment
from src.models.experiment_data import ExperimentConfig
from src.repositories.graph_repository import GraphRepository
from src.repositories.report_repository import ReportRepository
from src.services.experiment_service import ExperimentService, float_list, int_list


@pytest.fixture
def service():
    return ExperimentService(GraphRepository(), ReportRepository())


def _run(service, experiment, **fields):
    return service.run(ExperimentConfig(experiment=experiment, **fields))


def test_registry_lists_all_experiments(service):
    assert service.experiments == [
        "sample", "layer-marginal", "tree-good", "tree-moments", "nice-w", "t2-scan", "t2-scaling",
        "lattice-eit", "lattice-chain", "lattice-cross", "randgraph-t3", "cycle-census", "er-scan", "verify"]


@pytest.mark.parametrize("fields, error", [
    ({"experiment": "nope"}, UnknownExperiment),
    ({"experiment": "sample", "trials": 0}, InvalidConfig),
    ({"experiment": "sample", "k": 0}, InvalidConfig),
    ({"experiment": "sample", "sizes": [0]}, InvalidConfig),
    ({"experiment": "sample", "workers": 0}, InvalidConfig),
    ({"experiment": "sample"}, InvalidConfig),
])
def test_invalid_configs(service, fields, error):
    with pytest.raises(error):
        service.run(ExperimentConfig(**fields))


def test_list_helpers():
    assert int_list(None, "2,5") == [2, 5]
    assert int_list(7, "2") == [7]
    assert float_list("0.5, 1", "") == [0.5, 1.0]


def test_layer_marginal_replay_is_identical_across_workers(service):
    reports = ReportRepository()
    texts = [reports.render(_run(service, "layer-marginal", generator="star:4", trials=300, seed=7,
                                 workers=workers))
             for workers in (1, 2, 1)]
    assert texts[0] == texts[1] == texts[2]
    assert "# seed=7" in texts[0]


def test_layer_marginal_rows(service):
    report = _run(service, "layer-marginal", generator="star:4", trials=2000, seed=1)
    assert report.columns == ["layer", "frequency", "stderr", "expected"]
    assert [row[0] for row in report.rows] == [1, 2, 3, 4, 5]
    assert all(row[3] == "1/5" for row in report.rows)
    assert report.summary["max_sigma"] < 5
    assert report.wall_clock >= 0


def test_layer_marginal_rejects_missing_vertex(service):
    with pytest.raises(InvalidConfig):
        _run(service, "layer-marginal", generator="star:2", params={"vertex": 9})


def test_sample_report(service):
    report = _run(service, "sample", generator="cycle:6", k=1, seed=3)
    assert report.columns == ["vertex", "age_rank", "layer", "in_tk"]
    assert [row[0] for row in report.rows] == list(range(6))
    assert report.summary["tk_size"] == sum(row[3] for row in report.rows)
    assert report.summary["edges"] == 6


def test_tree_experiments(service):
    good = _run(service, "tree-good", k=1, trials=20)
    assert good.columns == ["trial", "z_k", "k_good"] and len(good.rows) == 20
    moments = _run(service, "tree-moments", k=2, trials=10)
    assert [row[0] for row in moments.rows] == [1, 2]


def test_t2_experiments(service):
    scan = _run(service, "t2-scan", sizes=[1, 2, 3], trials=50)
    assert [row[1] for row in scan.rows] == [3, 6, 12]
    assert scan.rows[0][2] == "3/2"
    assert scan.summary["non_increasing"] and scan.passed
    scaling = _run(service, "t2-scaling", generator="cycle", sizes=[20], trials=3)
    assert scaling.columns == ["n", "mean", "stderr", "ratio"]


def test_lattice_experiments(service):
    chain = _run(service, "lattice-chain", trials=5000, params={"d": 20, "truncation": 5})
    assert len(chain.rows) == 15
    assert chain.summary["weighted_sum"] == "divergente"
    assert chain.summary["a_prime"] == "21/20"
    cross = _run(service, "lattice-cross", trials=3,
                 params={"dims": "3", "layers_k": 7, "radius": 5})
    assert cross.rows[0][4] == 3 and cross.rows[0][7] == 6.0
    eit = _run(service, "lattice-eit", trials=500, params={"dims": "2", "horizon": 5})
    statistics = [row[1] for row in eit.rows]
    assert statistics[:5] == ["tau1", "tau2", "tau3", "censored", "alpha"]
    assert "tail1" in statistics


def test_random_graph_experiments(service):
    t3 = _run(service, "randgraph-t3", generator="3", sizes=[60], trials=2)
    assert t3.summary["molloy_reed_q"] == 3.0 and t3.summary["all_positive"]
    assert t3.passed
    census = _run(service, "cycle-census", sizes=[100], trials=3, params={"k_max": 3})
    assert [row[0] for row in census.rows] == [1, 2, 3]
    assert census.rows[0][3] == 1.0
    scan = _run(service, "er-scan", sizes=[100], trials=2, params={"c": "1,2"})
    assert [row[0] for row in scan.rows] == [1.0, 2.0]
    with pytest.raises(InvalidConfig):
        _run(service, "er-scan", sizes=[100], params={"c": "0"})


def test_random_graph_replay_is_identical_across_workers(service):
    reports = ReportRepository()
    texts = [reports.render(_run(service, "randgraph-t3", generator="3,4", sizes=[50, 80], trials=3,
                                 seed=4, workers=workers))
             for workers in (1, 2)]
    assert texts[0] == texts[1]


def test_eit_pair_rows_only_for_large_d(service):
    report = _run(service, "lattice-eit", trials=200,
                  params={"dims": "5", "horizon": 4, "pair_trials": 50})
    statistics = [row[1] for row in report.rows]
    assert "p12_scaled" in statistics and "p1234_ratio" in statistics
    ratios = [row for row in report.rows if row[1].endswith("_ratio")]
    assert all(math.isnan(row[2]) or row[2] >= 0 for row in ratios)


@pytest.mark.parametrize("length", [14, 13])
def test_nice_w_needs_odd_length_from_15(service, length):
    with pytest.raises(InvalidConfig):
        _run(service, "nice-w", params={"length": length})


@pytest.mark.slow
def test_nice_w_experiment(service):
    report = _run(service, "nice-w", trials=2, params={"marked": 1})
    assert report.columns == ["trial", "good_paths", "nice_paths", "w_size"]
    assert report.summary["marked"] == 1
    for _, good, nice, w in report.rows:
        assert nice <= good
        assert (w > 0) == (nice > 0)
    assert 0 <= report.summary["nonempty"] <= 1


@pytest.mark.slow
def test_verify_experiment_passes(service):
    report = _run(service, "verify", trials=5, params={"include_large": False})
    assert report.passed
    assert report.summary["failed"] == 0
