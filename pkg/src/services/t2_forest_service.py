"""
Serviço de T_2
Estrutura de floresta monótona, família Gamma', pesos kappa e decaimento de I_{v,n}
"""
import logging
import math
from fractions import Fraction
from typing import Callable, FrozenSet, List, Mapping, Optional, Sequence

import networkx as nx
import numpy as np
from scipy.sparse import csgraph

from ..config.settings import settings
from ..models.errors import EnumerationTooLarge
from ..models.experiment_data import Estimate
from ..models.graph_data import Graph
from ..models.layers_data import AgeAssignment
from ..models.path_data import RecurrenceCheck, RestrictedPath, T2Structure
from .graph_service import graph_service
from .layers_service import layers_service
from .trial_service import Repeater, sequential

logger = logging.getLogger(__name__)

GraphGenerator = Callable[[int, np.random.Generator], Graph]


def _largest_trial(params, rng: np.random.Generator) -> int:
    generator, n = params
    return t2_forest_service.largest_t2_component(generator(n, rng), rng)


class T2ForestService:
    """Análise estrutural de T_2 e a recorrência das somas S_n"""

    def analyze_T2(self, g: Graph, ages: AgeAssignment) -> T2Structure:
        """Floresta, mínimos por componente e monotonicidade das idades"""
        layers = layers_service.compute_layers(g, ages)
        tk = layers_service.extract_tk(g, layers, 2)
        sub = tk.graph
        if sub.n == 0:
            empty = np.zeros(0, dtype=np.int64)
            return T2Structure(tk, True, True, empty, empty.reshape(0, 2))
        local_age = np.asarray(ages.values)[tk.vertices]
        labels, sizes = graph_service.connected_components(sub)
        forest = sub.edge_count == sub.n - len(sizes)

        order = np.argsort(local_age, kind="stable")
        _, first = np.unique(labels[order], return_index=True)
        minima = order[first]

        # raiz virtual ligada aos mínimos: uma BFS cobre todas as componentes
        virtual = sub.n
        edges = sub.edges()
        lo = np.concatenate([edges[:, 0], minima])
        hi = np.concatenate([edges[:, 1], np.full(len(minima), virtual)])
        augmented = Graph.from_canonical(lo, hi, sub.n + 1)
        _, pred = csgraph.breadth_first_order(augmented.csr, virtual, directed=False,
                                              return_predecessors=True)
        pred = pred[:sub.n]
        inner = pred != virtual
        bad = np.flatnonzero(inner & (local_age[np.where(inner, pred, 0)] >= local_age))
        monotone = forest and not len(bad)

        counterexample = None
        if not forest:
            cycle = nx.find_cycle(sub.to_networkx())
            counterexample = tuple(tk.original(u) for u, _ in cycle)
        elif len(bad):
            walk = [int(bad[0])]
            while pred[walk[-1]] != virtual:
                walk.append(int(pred[walk[-1]]))
            counterexample = tuple(tk.original(u) for u in reversed(walk))
        if counterexample is not None:
            logger.warning(f"Violação estrutural em T_2: {counterexample}")

        original = tk.vertices[edges] if len(edges) else edges
        swap = np.asarray(ages.values)[original[:, 0]] > np.asarray(ages.values)[original[:, 1]]
        orientation = np.where(swap[:, None], original[:, ::-1], original)
        return T2Structure(subgraph=tk, forest=forest, monotone=monotone,
                           component_minima=tk.vertices[minima], orientation=orientation,
                           counterexample=counterexample)

    def enumerate_gamma_prime(self, g: Graph, v: int, n: int) -> List[RestrictedPath]:
        """Caminhos de Gamma'_{v,n}: simples, sem cordas, graus >= 2 após v"""
        if n < 1:
            raise ValueError(f"n deve ser >= 1: {n}")
        cap = settings.limits.enumeration_cap
        paths = [(v,)]
        for _ in range(n):
            paths = [p + (w,) for p in paths for w in self._extensions(g, p)]
            if len(paths) > cap:
                raise EnumerationTooLarge(f"Mais de {cap} caminhos em Gamma'_({v},{n})")
        return [self._restricted(g, p) for p in paths]

    def _extensions(self, g: Graph, path) -> List[int]:
        earlier = set(path[:-1])
        out = []
        for w in g.adjacency[path[-1]]:
            if w in earlier or g.degree(w) < 2:
                continue
            if any(u in earlier for u in g.adjacency[w]):
                continue
            out.append(w)
        return out

    def _restricted(self, g: Graph, path) -> RestrictedPath:
        return RestrictedPath(vertices=tuple(path), degrees=tuple(g.degree(u) for u in path))

    def kappa(self, gamma: RestrictedPath) -> Fraction:
        """kappa(gamma) = prod_{i=2}^{n} (d_i/(d_i-1)) ((d_i + d_{i-1} - 1)/d_{i-1})"""
        d = gamma.degrees
        value = Fraction(1)
        for i in range(1, gamma.n):
            value *= Fraction(d[i], d[i] - 1) * Fraction(d[i] + d[i - 1] - 1, d[i - 1])
        return value

    def tail_sets(self, g: Graph, gamma: RestrictedPath) -> List[FrozenSet[int]]:
        """T_1(gamma), ..., T_n(gamma)"""
        vs = gamma.vertices
        n = gamma.n
        if n == 1:
            return [frozenset(vs)]
        sets = []
        for i in range(2, n + 1):
            tail = vs[i - 1:n]
            closed = set(tail)
            for u in tail:
                closed.update(g.adjacency[u])
            closed.discard(vs[i - 2])
            sets.append(frozenset(closed))
        return [sets[0] | {vs[0]}] + sets

    def prob_B_exact(self, g: Graph, gamma: RestrictedPath) -> Fraction:
        """Pr[B_gamma] = prod 1/|T_i(gamma)|"""
        p = Fraction(1)
        for tail in self.tail_sets(g, gamma):
            p /= len(tail)
        return p

    def b_gamma_occurs(self, g: Graph, gamma: RestrictedPath, ages: Mapping[int, int]) -> bool:
        """Idades crescentes ao longo de gamma e vértices internos mais novos que os vizinhos fora de gamma"""
        vs = gamma.vertices
        if any(ages[vs[i]] >= ages[vs[i + 1]] for i in range(gamma.n)):
            return False
        members = set(vs)
        for u in vs[1:-1]:
            if any(ages[w] < ages[u] for w in g.adjacency[u] if w not in members):
                return False
        return True

    def l_gamma_occurs(self, gamma: RestrictedPath, ages: Mapping[int, int], layers) -> bool:
        """gamma contido em T_2 com v o mais novo de gamma"""
        vs = gamma.vertices
        if any(layers[u] > 2 for u in vs):
            return False
        return all(ages[vs[0]] < ages[u] for u in vs[1:])

    def weighted_sum_recurrence_check(self, g: Graph, v: int, n_max: int) -> RecurrenceCheck:
        """Somas exatas S_n = sum kappa(gamma) Pr[B_gamma] para n = 1..n_max"""
        if n_max < 1:
            raise ValueError(f"n_max deve ser >= 1: {n_max}")
        cap = settings.limits.enumeration_cap
        sums, counts = [], []
        paths = [(v,)]
        for n in range(1, n_max + 1):
            paths = [p + (w,) for p in paths for w in self._extensions(g, p)]
            if len(paths) > cap:
                raise EnumerationTooLarge(f"Mais de {cap} caminhos em Gamma'_({v},{n})")
            total = Fraction(0)
            for p in paths:
                gamma = self._restricted(g, p)
                total += self.kappa(gamma) * self.prob_B_exact(g, gamma)
            sums.append(total)
            counts.append(len(paths))
            logger.debug(f"S_{n} = {total} ({len(paths)} caminhos)")
        violation = next((n for n in range(2, n_max) if sums[n] > sums[n - 1]), None)
        return RecurrenceCheck(sums=tuple(sums), path_counts=tuple(counts),
                               non_increasing=violation is None, first_violation=violation)

    def i_vn_occurs(self, g: Graph, v: int, n: int, ages: AgeAssignment) -> bool:
        """Algum gamma em Gamma'_{v,n} com gamma em T_2 e v o mais novo"""
        layers = layers_service.compute_layers(g, ages).layers
        age = ages.values
        if layers[v] > 2:
            return False
        stack = [(v,)]
        while stack:
            path = stack.pop()
            if len(path) == n + 1:
                return True
            for w in self._extensions(g, path):
                if layers[w] <= 2 and age[w] > age[v]:
                    stack.append(path + (w,))
        return False

    def estimate_I_vn(self, g: Graph, v: int, n: int, trials: int,
                      rng: np.random.Generator) -> Estimate:
        """Frequência de Monte Carlo do evento I_{v,n}"""
        hits = sum(self.i_vn_occurs(g, v, n, layers_service.sample_ages(g, rng))
                   for _ in range(trials))
        return Estimate.from_count(hits, trials)

    def i_vn_bound(self, max_degree: int, n: int) -> Fraction:
        """Delta^n / (n+1)!"""
        return Fraction(max_degree ** n, math.factorial(n + 1))

    def largest_t2_component(self, g: Graph, rng: np.random.Generator) -> int:
        tk = layers_service.sample_tk(g, 2, rng)
        return graph_service.largest_component_size(tk.graph)

    def t2_largest_component_scaling(self, generator: GraphGenerator, sizes: Sequence[int],
                                     trials: int, rng: np.random.Generator,
                                     repeat: Optional[Repeater] = None) -> List[list]:
        """Linhas (n, média do maior componente de T_2, erro padrão, média/log n)"""
        repeat = repeat or sequential(rng)
        rows = []
        for n in sizes:
            values = repeat(_largest_trial, (generator, n), trials, (n,))
            rows.append(self.scaling_row(n, values))
        return rows

    def scaling_row(self, n: int, values: Sequence[float]) -> list:
        est = Estimate.from_samples(values)
        ratio = est.mean / math.log(n) if n > 1 else math.nan
        logger.info(f"T_2 com n={n}: maior componente médio {est.mean:.2f}")
        return [n, est.mean, est.stderr, ratio]


t2_forest_service = T2ForestService()
