"""
Serviço de grafos aleatórios com sequência de graus
Ciclos do modelo de configuração, critério de Molloy-Reed e componente gigante em T_3
"""
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config.settings import settings
from ..models.errors import BadOrder, InvariantViolation, KTooLarge
from ..models.experiment_data import Estimate
from ..models.graph_data import CycleCensus, DegreeSequence, Graph, MultiGraph
from .graph_service import graph_service
from .layers_service import layers_service
from .trial_service import Repeater, sequential

logger = logging.getLogger(__name__)

SequenceGenerator = Callable[[int, np.random.Generator], DegreeSequence]


def _t3_trial(params, rng: np.random.Generator) -> float:
    generator, n = params
    return random_graphs_service.t3_fraction(generator(n, rng), rng)


def _er_trial(params, rng: np.random.Generator) -> float:
    n, c = params
    return random_graphs_service.er_t3_fraction(n, c, rng)


class RandomGraphsService:
    """Experimentos do modelo de configuração"""

    def count_cycles(self, g: Union[Graph, MultiGraph], k_max: int) -> CycleCensus:
        """Contagens exatas Y_1..Y_{k_max} (laços, pares paralelos e ciclos do esqueleto)"""
        if k_max > settings.limits.cycle_k_max:
            raise KTooLarge(f"k_max={k_max} acima de {settings.limits.cycle_k_max}")
        if k_max < 1:
            raise ValueError(f"k_max deve ser >= 1: {k_max}")
        if isinstance(g, Graph):
            mult = {(int(u), int(v)): 1 for u, v in g.edges()}
        else:
            mult = g.multiplicities
        counts = [0] * (k_max + 1)
        neighbors: Dict[int, List[int]] = {}
        for (u, v), m in mult.items():
            if u == v:
                counts[1] += m
                continue
            counts[2] += m * (m - 1) // 2
            neighbors.setdefault(u, []).append(v)
            neighbors.setdefault(v, []).append(u)

        def weight(u, v):
            return mult[(u, v) if u < v else (v, u)]

        longer = [0] * (k_max + 1)
        for s in sorted(neighbors):
            stack = [(s, (s,), 1)]
            while stack:
                v, path, w = stack.pop()
                for u in neighbors[v]:
                    if u == s and len(path) >= 3:
                        longer[len(path)] += w * weight(v, s)
                    elif u > s and len(path) < k_max and u not in path:
                        stack.append((u, path + (u,), w * weight(v, u)))
        for i in range(3, k_max + 1):
            counts[i] = longer[i] // 2
        return CycleCensus(tuple(counts[1:]))

    def poisson_cycle_means(self, d: int, k_max: int) -> List[Fraction]:
        """lambda_i = (d-1)^i / (2i), i = 1..k_max"""
        return [Fraction((d - 1) ** i, 2 * i) for i in range(1, k_max + 1)]

    def molloy_reed_Q(self, seq: DegreeSequence) -> Fraction:
        """Q = soma de lambda_i i (i - 2)"""
        if not seq.n:
            raise ValueError("Sequência de graus vazia")
        return sum((lam * i * (i - 2) for i, lam in seq.fractions().items()), Fraction(0))

    def degree_smoothing_step(self, r: int, r_prime: int) -> int:
        """Redução 2(r' - r - 1) ao trocar (r, r') por (r + 1, r' - 1)"""
        if r_prime < r + 2:
            raise BadOrder(f"Exige r' >= r + 2: ({r}, {r_prime})")
        decrease = 2 * (r_prime - r - 1)
        before = r * (r - 2) + r_prime * (r_prime - 2)
        after = (r + 1) * (r - 1) + (r_prime - 1) * (r_prime - 3)
        if before - after != decrease:
            raise InvariantViolation(f"Identidade falhou para ({r}, {r_prime})")
        return decrease

    def configuration_census(self, seq: DegreeSequence, k_max: int,
                             rng: np.random.Generator) -> CycleCensus:
        return self.count_cycles(graph_service.configuration_multigraph(seq, rng), k_max)

    def t3_fraction(self, seq: DegreeSequence, rng: np.random.Generator) -> float:
        """Fração de vértices no maior componente de T_3 de um grafo simples amostrado"""
        g = graph_service.simple_graph_from_sequence(seq, rng)
        tk = layers_service.sample_tk(g, 3, rng)
        return graph_service.largest_component_size(tk.graph) / g.n

    def er_t3_fraction(self, n: int, c: float, rng: np.random.Generator) -> float:
        g = graph_service.erdos_renyi(n, min(c / n, 1.0), rng)
        tk = layers_service.sample_tk(g, 3, rng)
        return graph_service.largest_component_size(tk.graph) / n

    def t3_giant_experiment(self, generator: SequenceGenerator, sizes: Sequence[int], trials: int,
                            rng: np.random.Generator, repeat: Optional[Repeater] = None) -> List[list]:
        """Linhas (n, fração média do maior componente de T_3, erro padrão, menor fração)"""
        repeat = repeat or sequential(rng)
        rows = []
        for n in sizes:
            fractions = repeat(_t3_trial, (generator, n), trials, (n,))
            rows.append(self.giant_row(n, fractions))
        return rows

    def giant_row(self, n: int, fractions: Sequence[float]) -> list:
        est = Estimate.from_samples(fractions)
        logger.info(f"T_3 com n={n}: fração gigante média {est.mean:.4f}")
        return [n, est.mean, est.stderr, min(fractions)]

    def er_t3_phase_scan(self, c_grid: Sequence[float], n: int, trials: int,
                         rng: np.random.Generator, repeat: Optional[Repeater] = None) -> List[list]:
        """Linhas (c, fração média do maior componente de T_3 em G(n, c/n), erro padrão)"""
        if any(c <= 0 for c in c_grid):
            raise ValueError(f"c deve ser positivo: {list(c_grid)}")
        repeat = repeat or sequential(rng)
        rows = []
        for index, c in enumerate(c_grid):
            est = Estimate.from_samples(repeat(_er_trial, (n, c), trials, (index,)))
            rows.append([c, est.mean, est.stderr])
        return rows

    def cycle_mean_table(self, censuses: Sequence[CycleCensus], d: int) -> List[Tuple[int, Estimate, Fraction]]:
        """(i, média empírica de Y_i, lambda_i) para cada comprimento"""
        if not censuses:
            return []
        k_max = censuses[0].k_max
        expected = self.poisson_cycle_means(d, k_max)
        return [(i, Estimate.from_samples([c.y(i) for c in censuses]), expected[i - 1])
                for i in range(1, k_max + 1)]


random_graphs_service = RandomGraphsService()
