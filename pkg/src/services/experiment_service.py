"""
Serviço de experimentos
Valida a configuração, despacha para o experimento nomeado e monta o relatório
"""
import logging
import math
import time
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from ..models.errors import DivergentSeries, InvalidConfig, UnknownExperiment
from ..models.experiment_data import Estimate, ExperimentConfig, ExperimentReport
from ..models.graph_data import DegreeSequence, Graph, RootedTree
from ..models.layers_data import LazyAgeSource
from ..models.path_data import NiceConfig
from ..repositories.graph_repository import GraphRepository
from ..repositories.report_repository import ReportRepository
from .graph_service import graph_service
from .lattice_service import PAIR_HORIZON, lattice_service
from .layers_service import layers_service
from .random_graphs_service import random_graphs_service
from .t2_forest_service import t2_forest_service
from .trial_service import TrialPool, trial_stream
from .tree_paths_service import tree_paths_service
from .verification_service import verification_service

logger = logging.getLogger(__name__)

_graphs = GraphRepository()

DEFAULT_CROSS_DIMS = "10,15,20"
DEFAULT_EIT_DIMS = "2,5,10"
DEFAULT_ER_GRID = "0.5,1,1.5,2,3,4,5"
VERIFY_FAMILIES = ("regular:3:60", "mixed:3,4,5:60", "er:3:60", "cycle:12", "complete:6")


def int_list(value: Any, default: str) -> List[int]:
    return [int(v) for v in _list(value, default)]


def float_list(value: Any, default: str) -> List[float]:
    return [float(v) for v in _list(value, default)]


def _list(value: Any, default: str) -> list:
    if value is None:
        value = default
    if isinstance(value, (int, float)):
        return [value]
    if isinstance(value, str):
        return [v for v in value.split(",") if v.strip()]
    return list(value)


# ensaios: funções de módulo para serializar entre processos

def _layer_trial(params, rng: np.random.Generator) -> int:
    g, vertex = params
    return layers_service.compute_layers(g, layers_service.sample_ages(g, rng)).layer_of(vertex)


def _zk_trial(params, rng: np.random.Generator) -> float:
    tree, k = params
    return float(tree_paths_service.sample_Zk(tree, k, rng))


def _ivn_trial(params, rng: np.random.Generator) -> bool:
    g, v, n = params
    return t2_forest_service.i_vn_occurs(g, v, n, layers_service.sample_ages(g, rng))


def _family_graph(family: str, n: int, rng: np.random.Generator) -> Graph:
    return _graphs.family(family)(n, rng)


def _degree_sequence(spec: str, n: int, rng: np.random.Generator) -> DegreeSequence:
    return _graphs.degree_sequence(spec, n, rng)


def _nice_trial(params, rng: np.random.Generator) -> tuple:
    tree, cfg = params
    outcome = tree_paths_service.check_nice_and_W(tree, layers_service.sample_ages(tree.graph, rng), cfg)
    return outcome.good_count, outcome.nice_count, outcome.w_size


def _census_trial(params, rng: np.random.Generator) -> tuple:
    seq, k_max = params
    return random_graphs_service.configuration_census(seq, k_max, rng).counts


def _cross_trial(params, rng: np.random.Generator) -> tuple:
    d, k, radius, budget = params
    src = LazyAgeSource(seed=int(rng.integers(2 ** 63)))
    result = lattice_service.search_open_monotone_path(d, k, radius, src, budget)
    return result.crossed, result.explored, result.longest_length


def _eit_trial(params, rng: np.random.Generator) -> List[list]:
    d, horizon, trials, pair_trials = params
    stats = lattice_service.sample_walk_pair(d, horizon, rng, trials)
    tail = lattice_service.tail_from_stats(stats)
    stats_rows = []
    for t in (1, 2):
        est = Estimate.from_count(int((stats.tau == t).sum()), trials)
        stats_rows.append([d, f"tau{t}", est.mean, est.stderr, float(lattice_service.tau_exact(d, t))])
    tau3 = Estimate.from_count(int((stats.tau == 3).sum()), trials)
    stats_rows.append([d, "tau3", tau3.mean, tau3.stderr, float(lattice_service.tau3_bound(d))])
    stats_rows.append([d, "censored", stats.censored_fraction(), math.nan, math.nan])
    stats_rows.append([d, "alpha", tail.alpha_hat, math.nan, lattice_service.alpha_approx(d)])
    for k, p, s in tail.to_rows():
        stats_rows.append([d, f"tail{k}", p, s, math.nan])
    if pair_trials and d >= 5:
        probs = lattice_service.conditional_pair_probs(d, pair_trials, rng)
        references = {"a2": 1.0, "p12": 1.0, "p123": 2.0, "p1234": 4.0}
        for name, value in probs.scaled().items():
            stats_rows.append([d, f"{name}_scaled", value, math.nan, references[name]])
        for name, reference in (("p123", 2.0), ("p1234", 4.0)):
            ratio = probs.ratio(name)
            stats_rows.append([d, f"{name}_ratio", math.nan if ratio is None else ratio,
                               math.nan, reference])
    return stats_rows


class ExperimentService:
    """Registro de experimentos reprodutíveis"""

    def __init__(self, graphs: GraphRepository, reports: ReportRepository):
        self.graphs = graphs
        self.reports = reports
        self._registry: Dict[str, Callable[[ExperimentConfig], ExperimentReport]] = {
            "sample": self._sample,
            "layer-marginal": self._layer_marginal,
            "tree-good": self._tree_good,
            "tree-moments": self._tree_moments,
            "nice-w": self._nice_w,
            "t2-scan": self._t2_scan,
            "t2-scaling": self._t2_scaling,
            "lattice-eit": self._lattice_eit,
            "lattice-chain": self._lattice_chain,
            "lattice-cross": self._lattice_cross,
            "randgraph-t3": self._randgraph_t3,
            "cycle-census": self._cycle_census,
            "er-scan": self._er_scan,
            "verify": self._verify,
        }

    @property
    def experiments(self) -> List[str]:
        return list(self._registry)

    def validate(self, config: ExperimentConfig):
        if config.experiment not in self._registry:
            raise UnknownExperiment(f"Experimento desconhecido: {config.experiment!r}")
        if config.trials < 1:
            raise InvalidConfig(f"trials deve ser positivo: {config.trials}")
        if config.k < 1:
            raise InvalidConfig(f"k deve ser >= 1: {config.k}")
        if any(n < 1 for n in config.sizes):
            raise InvalidConfig(f"Tamanhos devem ser positivos: {config.sizes}")
        if config.workers is not None and config.workers < 1:
            raise InvalidConfig(f"workers deve ser >= 1: {config.workers}")

    def run(self, config: ExperimentConfig) -> ExperimentReport:
        """Executa o experimento; mesmo relatório para a mesma semente, com qualquer número de processos"""
        self.validate(config)
        logger.info(f"Iniciando {config.experiment} (semente {config.seed}, {config.trials} ensaios)")
        start = time.perf_counter()
        report = self._registry[config.experiment](config)
        report.wall_clock = time.perf_counter() - start
        logger.info(f"{config.experiment} concluído em {report.wall_clock:.2f}s")
        return report

    def emit(self, report: ExperimentReport, fmt: str = "csv", path=None):
        return self.reports.emit(report, fmt, path)

    def _pool(self, config: ExperimentConfig) -> TrialPool:
        return TrialPool(config.workers)

    def _report(self, config: ExperimentConfig, columns: Sequence[str], rows: List[list],
                **summary) -> ExperimentReport:
        return ExperimentReport(experiment=config.experiment, config=config.to_dict(),
                                columns=list(columns), rows=rows, summary=summary)

    def _sizes(self, config: ExperimentConfig, default: Sequence[int]) -> List[int]:
        return list(config.sizes) or list(default)

    # modelo de camadas

    def _sample(self, config: ExperimentConfig) -> ExperimentReport:
        if not config.generator:
            raise InvalidConfig("sample exige generator")
        rng = trial_stream(config.seed, (0,))
        g = self.graphs.build(config.generator, rng)
        ages = layers_service.sample_ages(g, rng)
        layers = layers_service.compute_layers(g, ages)
        rows = [row + [row[2] <= config.k] for row in layers_service.configuration_rows(ages, layers)]
        return self._report(config, ["vertex", "age_rank", "layer", "in_tk"], rows,
                            tk_size=int(layers.open_mask(config.k).sum()), edges=g.edge_count)

    def _layer_marginal(self, config: ExperimentConfig) -> ExperimentReport:
        spec = config.generator or "star:4"
        vertex = int(config.param("vertex", 0))
        g = self.graphs.build(spec, trial_stream(config.seed, (0,)))
        if not 0 <= vertex < g.n:
            raise InvalidConfig(f"Vértice {vertex} fora do grafo")
        layers = self._pool(config).repeat(_layer_trial, (g, vertex), config.trials, config.seed, (1,))
        m = g.degree(vertex)
        counts = np.bincount(layers, minlength=m + 2)
        expected = layers_service.layer_marginal(m)
        rows = []
        for i in range(1, m + 2):
            est = Estimate.from_count(int(counts[i]), config.trials)
            rows.append([i, est.mean, est.stderr, str(expected)])
        worst = max(abs(r[1] - float(expected)) / r[2] if r[2] else 0.0 for r in rows)
        return self._report(config, ["layer", "frequency", "stderr", "expected"], rows,
                            degree=m, max_sigma=worst)

    # árvores

    def _tree(self, config: ExperimentConfig, depth: int) -> RootedTree:
        profile = str(config.param("profile", "3"))
        if profile == "counterexample":
            return graph_service.counterexample_tree(depth)
        return graph_service.generate_spherically_symmetric_tree(self.graphs.degree_profile(profile), depth)

    def _tree_good(self, config: ExperimentConfig) -> ExperimentReport:
        tree = self._tree(config, 2 * config.k)
        zs = self._pool(config).repeat(_zk_trial, (tree, config.k), config.trials, config.seed, (config.k,))
        rows = [[i, z, z >= 0.5] for i, z in enumerate(zs)]
        summary = tree_paths_service.second_moment_summary(zs)
        return self._report(config, ["trial", "z_k", "k_good"], rows, **summary)

    def _tree_moments(self, config: ExperimentConfig) -> ExperimentReport:
        rows = []
        for k in self._sizes(config, range(1, config.k + 1)):
            tree = self._tree(config, 2 * k)
            zs = self._pool(config).repeat(_zk_trial, (tree, k), config.trials, config.seed, (k,))
            s = tree_paths_service.second_moment_summary(zs)
            rows.append([k, s["mean"], s["mean_stderr"], s["second_moment"], s["pz_bound"],
                         s["good_fraction"]])
            logger.info(f"k={k}: E[Z_k] = {s['mean']:.4f} +- {s['mean_stderr']:.4f}")
        return self._report(config, ["k", "mean", "stderr", "second_moment", "pz_bound",
                                     "good_fraction"], rows)

    def _nice_w(self, config: ExperimentConfig) -> ExperimentReport:
        k = int(config.param("length", 15))
        if k % 2 == 0 or k < 15:
            raise InvalidConfig(f"length deve ser ímpar e >= 15: {k}")
        tree = self._tree(config, k + 1)
        cfg = NiceConfig(marked=frozenset(int_list(config.param("marked"), "")), k=k)
        outcomes = self._pool(config).repeat(_nice_trial, (tree, cfg), config.trials, config.seed, (k,))
        rows = [[i, good, nice, w] for i, (good, nice, w) in enumerate(outcomes)]
        summary = tree_paths_service.nice_w_summary([w for _, _, w in outcomes], k)
        return self._report(config, ["trial", "good_paths", "nice_paths", "w_size"], rows,
                            marked=len(cfg.marked), **summary)

    # T_2

    def _t2_scan(self, config: ExperimentConfig) -> ExperimentReport:
        ns = self._sizes(config, range(3, 8))
        spec = config.generator or f"tree:3:{max(ns) + 1}"
        g = self.graphs.build(spec, trial_stream(config.seed, (0,)))
        v = int(config.param("vertex", 0))
        check = t2_forest_service.weighted_sum_recurrence_check(g, v, max(ns))
        rows = []
        for n in ns:
            hits = self._pool(config).repeat(_ivn_trial, (g, v, n), config.trials, config.seed, (n,))
            est = Estimate.from_count(sum(hits), config.trials)
            s_n = check.sums[n - 1]
            rows.append([n, check.path_counts[n - 1], str(s_n), float(s_n), est.mean, est.stderr,
                         float(t2_forest_service.i_vn_bound(g.max_degree, n))])
        report = self._report(config, ["n", "paths", "s_n", "s_n_float", "i_vn", "stderr", "bound"],
                              rows, non_increasing=check.non_increasing,
                              first_violation=check.first_violation)
        report.passed = check.non_increasing
        return report

    def _t2_scaling(self, config: ExperimentConfig) -> ExperimentReport:
        family = config.generator or "regular:3"
        self.graphs.family(family)
        rows = t2_forest_service.t2_largest_component_scaling(
            partial(_family_graph, family), self._sizes(config, (100, 1000, 10000)), config.trials,
            trial_stream(config.seed, ()), repeat=self._pool(config).repeater(config.seed))
        return self._report(config, ["n", "mean", "stderr", "ratio"], rows)

    # rede Z^d

    def _lattice_eit(self, config: ExperimentConfig) -> ExperimentReport:
        dims = int_list(config.param("dims"), DEFAULT_EIT_DIMS)
        horizon = int(config.param("horizon", PAIR_HORIZON))
        pair_trials = int(config.param("pair_trials", 0))
        tasks = [(d, horizon, config.trials, pair_trials) for d in dims]
        rows = [row for block in self._pool(config).map(_eit_trial, tasks, config.seed) for row in block]
        return self._report(config, ["d", "statistic", "estimate", "stderr", "reference"], rows)

    def _lattice_chain(self, config: ExperimentConfig) -> ExperimentReport:
        d = int(config.param("d", 20))
        truncation = int(config.param("truncation", 10))
        q42, a_prime = config.param("q42"), config.param("a_prime")
        params = lattice_service.chain_params(
            d, None if q42 is None else Fraction(str(q42)),
            None if a_prime is None else Fraction(str(a_prime)))
        r0, r2 = lattice_service.simulate_chain(params, config.trials, trial_stream(config.seed, (d,)))
        rows = []
        for k2 in range(1, truncation + 1):
            for k0 in range(1, k2 + 1):
                empirical = float(np.mean((r0 == k0) & (r2 == k2)))
                rows.append([k0, k2, float(lattice_service.chain_law(params, k0, k2)),
                             float(lattice_service.chain_law_display(params, k0, k2)), empirical])
        summary = {"tv": lattice_service.chain_tv(params, r0, r2, truncation),
                   "a_prime": str(params.a_prime)}
        try:
            summary["weighted_sum"] = float(lattice_service.chain_weighted_sum(params))
        except DivergentSeries as e:
            logger.warning(f"Soma ponderada divergente: {e}")
            summary["weighted_sum"] = "divergente"
        return self._report(config, ["k0", "k2", "exact", "display", "empirical"], rows, **summary)

    def _lattice_cross(self, config: ExperimentConfig) -> ExperimentReport:
        dims = int_list(config.param("dims"), DEFAULT_CROSS_DIMS)
        k = int(config.param("layers_k", 4))
        radius = int(config.param("radius", 30))
        budget = config.param("budget")
        rows = []
        for d in dims:
            results = self._pool(config).repeat(_cross_trial, (d, k, radius, budget), config.trials,
                                                config.seed, (d,))
            crossings = sum(1 for crossed, _, _ in results if crossed)
            est = Estimate.from_count(crossings, config.trials)
            explored = float(np.mean([r[1] for r in results]))
            longest = float(np.mean([r[2] for r in results]))
            rows.append([d, k, radius, config.trials, crossings, est.mean, est.stderr, explored, longest])
            logger.info(f"d={d}: frequência de cruzamento {est.mean:.3f}")
        return self._report(config, ["d", "k", "radius", "seeds", "crossings", "frequency", "stderr",
                                     "mean_explored", "mean_longest"], rows)

    # grafos aleatórios

    def _randgraph_t3(self, config: ExperimentConfig) -> ExperimentReport:
        spec = config.generator or "3"
        self.graphs.parse_degree_values(spec)
        rows = random_graphs_service.t3_giant_experiment(
            partial(_degree_sequence, spec), self._sizes(config, (1000, 10000)), config.trials,
            trial_stream(config.seed, ()), repeat=self._pool(config).repeater(config.seed))
        seq = self.graphs.degree_sequence(spec, max(r[0] for r in rows), trial_stream(config.seed, (0,)))
        all_positive = all(r[3] > 0 for r in rows)
        report = self._report(config, ["n", "mean", "stderr", "min"], rows,
                              molloy_reed_q=float(random_graphs_service.molloy_reed_Q(seq)),
                              all_positive=all_positive)
        report.passed = all_positive
        return report

    def _cycle_census(self, config: ExperimentConfig) -> ExperimentReport:
        d = int(config.param("d", 3))
        k_max = int(config.param("k_max", 4))
        n = self._sizes(config, (10000,))[0]
        counts = self._pool(config).repeat(_census_trial, (DegreeSequence.regular(d, n), k_max),
                                           config.trials, config.seed, (n,))
        means = random_graphs_service.poisson_cycle_means(d, k_max)
        rows = []
        for i in range(1, k_max + 1):
            est = Estimate.from_samples([c[i - 1] for c in counts])
            rows.append([i, est.mean, est.stderr, float(means[i - 1])])
        return self._report(config, ["i", "mean", "stderr", "lambda_i"], rows)

    def _er_scan(self, config: ExperimentConfig) -> ExperimentReport:
        grid = float_list(config.param("c"), DEFAULT_ER_GRID)
        if any(c <= 0 for c in grid):
            raise InvalidConfig(f"Grade de c deve ser positiva: {grid}")
        n = self._sizes(config, (1000,))[0]
        rows = random_graphs_service.er_t3_phase_scan(grid, n, config.trials, trial_stream(config.seed, ()),
                                                      repeat=self._pool(config).repeater(config.seed))
        return self._report(config, ["c", "mean", "stderr"], rows, n=n)

    # verificação

    def _verify(self, config: ExperimentConfig) -> ExperimentReport:
        families = [self._family_builder(spec) for spec in VERIFY_FAMILIES]
        include_large = bool(config.param("include_large", True))
        results = verification_service.run_all(families, config.trials, trial_stream(config.seed, (0,)),
                                               include_large=include_large)
        report = self._report(config, ["check", "expected", "observed", "ok"],
                              [r.to_row() for r in results],
                              checks=len(results), failed=sum(not r.ok for r in results))
        report.passed = all(r.ok for r in results)
        return report

    def _family_builder(self, spec: str) -> Callable[[np.random.Generator], Graph]:
        return lambda rng: self.graphs.build(spec, rng)
