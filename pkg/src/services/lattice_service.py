"""
Serviço da rede Z^d
Passeios monótonos, eventos A_i na rede, cadeia {0, 2, 4, inf} e busca de caminhos abertos em T_k(Z^d)
"""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import settings
from ..models.errors import BudgetExhausted, DivergentSeries
from ..models.graph_data import LatticePoint, l1_norm, lattice_neighbors, lattice_step
from ..models.lattice_data import (CENSORED, ChainParams, ChainState, CrossingResult, IntersectionTail,
                                   LatticeBlockOutcome, PairProbabilities, WalkPairStats)
from ..models.layers_data import LazyAgeSource
from .layers_service import layers_service

logger = logging.getLogger(__name__)

BATCH_ROWS = 1 << 17
MIN_TAIL_COUNT = 20
PAIR_HORIZON = 30


def _walk_step(diff: np.ndarray, norm: np.ndarray, rng: np.random.Generator):
    """Um passo dos dois passeios sobre o vetor diferença S - S'"""
    rows, d = diff.shape
    i = rng.integers(d, size=rows)
    j = rng.integers(d, size=rows)
    moved = np.flatnonzero(i != j)
    i, j = i[moved], j[moved]
    old_i, old_j = diff[moved, i], diff[moved, j]
    norm[moved] += np.abs(old_i + 1) - np.abs(old_i) + np.abs(old_j - 1) - np.abs(old_j)
    diff[moved, i] = old_i + 1
    diff[moved, j] = old_j - 1


def _batches(trials: int):
    done = 0
    while done < trials:
        size = min(BATCH_ROWS, trials - done)
        yield size
        done += size


class LatticeService:
    """Estatísticas de passeios monótonos e percolação em camadas de Z^d"""

    # pares de passeios

    def sample_walk_pair(self, d: int, horizon: int, rng: np.random.Generator,
                         trials: int = 1) -> WalkPairStats:
        """Tempo de encontro e interseções de trials pares independentes, censurados no horizonte"""
        if d < 2 or horizon < 1:
            raise ValueError(f"Exige d >= 2 e horizonte >= 1: d={d}, horizonte={horizon}")
        taus, counts = [], []
        for size in _batches(trials):
            diff = np.zeros((size, d), dtype=np.int32)
            norm = np.zeros(size, dtype=np.int64)
            tau = np.full(size, CENSORED, dtype=np.int64)
            common = np.ones(size, dtype=np.int64)
            for step in range(1, horizon + 1):
                _walk_step(diff, norm, rng)
                met = norm == 0
                tau[met & (tau == CENSORED)] = step
                common += met
            taus.append(tau)
            counts.append(common)
        stats = WalkPairStats(d=d, horizon=horizon, tau=np.concatenate(taus),
                              intersections=np.concatenate(counts))
        if stats.censored_fraction() > 0:
            logger.debug(f"Fração censurada de tau: {stats.censored_fraction():.4f}")
        return stats

    def tau_exact(self, d: int, t: int) -> Fraction:
        """P(tau = 1) = 1/d e P(tau = 2) = d^-2 - d^-3"""
        if t == 1:
            return Fraction(1, d)
        if t == 2:
            return Fraction(1, d ** 2) - Fraction(1, d ** 3)
        raise ValueError(f"Valor exato disponível só para t = 1, 2: {t}")

    def tau3_bound(self, d: int) -> Fraction:
        return Fraction(3, d ** 3)

    def alpha_approx(self, d: int) -> float:
        return 1 / d + 1 / d ** 2

    def intersection_tail(self, d: int, horizon: int, trials: int,
                          rng: np.random.Generator) -> IntersectionTail:
        """Cauda de |gamma ^ gamma'| e alpha estimado pela inclinação do log da cauda"""
        return self.tail_from_stats(self.sample_walk_pair(d, horizon, rng, trials))

    def tail_from_stats(self, stats: WalkPairStats) -> IntersectionTail:
        d, horizon, trials = stats.d, stats.horizon, stats.trials
        counts = np.bincount(stats.intersections)
        at_least = counts[::-1].cumsum()[::-1]
        ks = np.arange(1, len(counts))
        hits = at_least[1:]
        tail = hits / trials
        stderr = np.sqrt(tail * (1 - tail) / trials)
        fit = (hits >= MIN_TAIL_COUNT) & (ks >= 2)
        alpha_hat = math.nan
        if fit.sum() >= 2:
            slope, _ = np.polyfit(ks[fit], np.log(tail[fit]), 1)
            alpha_hat = float(np.exp(slope))
        logger.info(f"d={d}: alpha estimado {alpha_hat:.4f} (aprox. {self.alpha_approx(d):.4f})")
        return IntersectionTail(d=d, horizon=horizon, k=ks, tail=tail, stderr=stderr,
                                alpha_hat=alpha_hat)

    def _hit_frequency(self, start: np.ndarray, target: int, horizon: int, trials: int,
                       rng: np.random.Generator) -> int:
        """Número de pares que atingem distância target a partir da diferença start"""
        hits = 0
        for size in _batches(trials):
            diff = np.tile(start.astype(np.int32), (size, 1))
            norm = np.full(size, int(np.abs(start).sum()), dtype=np.int64)
            hit = np.zeros(size, dtype=bool)
            for _ in range(horizon):
                _walk_step(diff, norm, rng)
                hit |= norm == target
            hits += int(hit.sum())
        return hits

    def conditional_pair_probs(self, d: int, trials: int, rng: np.random.Generator,
                               horizon: int = PAIR_HORIZON) -> PairProbabilities:
        """Estimativas de a_2, p_12, p_123 e p_1234 com o condicionamento exato"""
        if d < 5:
            raise ValueError(f"Exige d >= 5: {d}")
        e = np.eye(d, dtype=np.int32)
        cases = [
            (e[0] - e[1], 0),
            (2 * e[0] - 2 * e[1], 2),
            (2 * e[0] - e[1] - e[2], 2),
            (e[0] + e[2] - e[1] - e[3], 2),
        ]
        hits = tuple(self._hit_frequency(start, target, horizon, trials, rng)
                     for start, target in cases)
        a2, p12, p123, p1234 = (h / trials for h in hits)
        return PairProbabilities(d=d, trials=trials, a2=a2, p12=p12, p123=p123,
                                 p1234=p1234, hits=hits)

    # eventos A_i na rede

    def lattice_marginal_Ai(self, d: int) -> Fraction:
        """Pr[A_i(gamma)] exata em Z^d"""
        if d < 2:
            raise ValueError(f"Exige d >= 2: {d}")
        both_low = Fraction(2, 2 * d - 1) ** 2
        one_side = Fraction(2 * (2 * d - 3), (4 * d - 2) * (4 * d - 3) * (2 * d - 1))
        crossed = Fraction(3 * (2 * d - 3), (4 * d - 2) * (4 * d - 3) * (4 * d - 5))
        return both_low + one_side + crossed

    def lattice_marginal_display(self, d: int) -> Fraction:
        """Expressão de três termos sem o termo espelhado (cota inferior)"""
        if d < 2:
            raise ValueError(f"Exige d >= 2: {d}")
        return (Fraction(2, 2 * d - 1) ** 2
                + Fraction(2 * d - 3, (4 * d - 2) * (4 * d - 3) * (2 * d - 1))
                + Fraction(3 * (2 * d - 3), (4 * d - 2) * (4 * d - 3) * (4 * d - 5)))

    def validate_monotone(self, gamma: Sequence[LatticePoint]):
        for a, b in zip(gamma, gamma[1:]):
            steps = [y - x for x, y in zip(a, b)]
            if sorted(steps) != [0] * (len(a) - 1) + [1]:
                raise ValueError(f"Passo não monótono de {a} para {b}")

    def _padded(self, gamma: Sequence[LatticePoint]) -> List[LatticePoint]:
        """gamma_0 = gamma_1 - e_1, ..., gamma_{2k+1} = gamma_{2k} + e_1"""
        return [lattice_step(gamma[0], 0, -1)] + list(gamma) + [lattice_step(gamma[-1], 0, 1)]

    def block_counted(self, gamma: Sequence[LatticePoint], j: int) -> List[LatticePoint]:
        """Vizinhos contados em M_j (j 1-indexado)"""
        padded = self._padded(gamma)
        excluded = padded[j - 1] if j % 2 else padded[j + 1]
        return [u for u in lattice_neighbors(padded[j]) if u != excluded]

    def block_event(self, gamma: Sequence[LatticePoint], i: int):
        """Predicado de A_i(gamma) sobre ranks e os pontos de que depende"""
        a, b = gamma[2 * i - 2], gamma[2 * i - 1]
        around_a = self.block_counted(gamma, 2 * i - 1)
        around_b = self.block_counted(gamma, 2 * i)

        def predicate(rank) -> bool:
            m_a = sum(1 for u in around_a if rank[u] < rank[a])
            m_b = sum(1 for u in around_b if rank[u] < rank[b])
            return m_a <= 2 and m_b <= 2

        relevant = list(dict.fromkeys([a, b] + around_a + around_b))
        return relevant, predicate

    def check_lattice_A(self, gamma: Sequence[LatticePoint], src: LazyAgeSource) -> LatticeBlockOutcome:
        """Contagens M_j e os eventos A_i(gamma) sob idades preguiçosas"""
        if len(gamma) % 2 or not gamma:
            raise ValueError("Caminho precisa de 2k vértices")
        self.validate_monotone(gamma)
        m_counts = []
        for j in range(1, len(gamma) + 1):
            own = src.age(gamma[j - 1])
            m_counts.append(sum(1 for u in self.block_counted(gamma, j) if src.age(u) < own))
        blocks = tuple(m_counts[2 * i] <= 2 and m_counts[2 * i + 1] <= 2
                       for i in range(len(gamma) // 2))
        return LatticeBlockOutcome(blocks=blocks, m_counts=tuple(m_counts))

    # cadeia auxiliar

    def default_a_prime(self, d: int) -> Fraction:
        """a' = min(d raiz(Pr[A_i]), 1.05), racionalizado"""
        a = d * math.sqrt(float(self.lattice_marginal_Ai(d)))
        return Fraction(str(round(min(a, 1.05), 6)))

    def chain_params(self, d: int, q42: Optional[Fraction] = None,
                     a_prime: Optional[Fraction] = None) -> ChainParams:
        if d < 2:
            raise ValueError(f"Exige d >= 2: {d}")
        q20 = Fraction(1, d ** 2) / (1 - Fraction(3 * d - 4, d ** 2))
        q42 = Fraction(4, d ** 2) if q42 is None else Fraction(q42)
        if not 0 <= q42 < 1 or not 0 < q20 < 1:
            raise ValueError(f"Probabilidades de transição inválidas para d={d}")
        a_prime = self.default_a_prime(d) if a_prime is None else Fraction(a_prime)
        return ChainParams(d=d, q20=q20, q42=q42, a_prime=a_prime)

    def chain_law(self, params: ChainParams, k0: int, k2: int) -> Fraction:
        """P[r_0 = k0, r_2 = k2] exata"""
        if not 1 <= k0 <= k2:
            return Fraction(0)
        return (math.comb(k2 - 1, k0 - 1) * params.q20 ** (k0 - 1)
                * (params.q24 * params.q42) ** (k2 - k0) * params.q24 * params.q4inf)

    def chain_law_display(self, params: ChainParams, k0: int, k2: int) -> Fraction:
        if not 1 <= k0 <= k2:
            return Fraction(0)
        return params.q20 ** (k0 - 1) * params.q42 ** (k2 - k0) * params.q4inf

    def chain_weighted_sum(self, params: ChainParams) -> Fraction:
        """E[p_0^{r_0} p_2^{r_2}] pela série geométrica"""
        if params.a_prime <= 1 or 2 * params.d - 7 <= 0 or params.p2_ratio >= 1:
            raise DivergentSeries(f"Série de p_2 diverge (d={params.d}, a'={params.a_prime})")
        p0, p2 = params.p0, params.p2
        ratio = p0 * p2 * params.q20 + p2 * params.q24 * params.q42
        if ratio >= 1:
            raise DivergentSeries(f"Razão {float(ratio):.4f} >= 1 (d={params.d})")
        return p0 * p2 * params.q24 * params.q4inf / (1 - ratio)

    def chain_transitions(self, params: ChainParams) -> Dict[ChainState, Dict[ChainState, Fraction]]:
        """Probabilidades de transição; ABSORBED não tem saída"""
        return {
            ChainState.ZERO: {ChainState.TWO: Fraction(1)},
            ChainState.TWO: {ChainState.ZERO: params.q20, ChainState.FOUR: params.q24},
            ChainState.FOUR: {ChainState.TWO: params.q42, ChainState.ABSORBED: params.q4inf},
        }

    def simulate_chain(self, params: ChainParams, trials: int,
                       rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """Visitas (r_0, r_2) da cadeia partindo de 0 até a absorção"""
        transitions = self.chain_transitions(params)
        state = np.full(trials, int(ChainState.ZERO), dtype=np.int64)
        r0 = np.zeros(trials, dtype=np.int64)
        r2 = np.zeros(trials, dtype=np.int64)
        alive = np.arange(trials)
        while len(alive):
            current = state[alive]
            r0[alive[current == ChainState.ZERO]] += 1
            r2[alive[current == ChainState.TWO]] += 1
            u = rng.random(len(alive))
            following = current.copy()
            for source, row in transitions.items():
                here = current == source
                targets = list(row.items())
                following[here] = targets[-1][0]
                lower = 0.0
                for target, p in targets[:-1]:
                    upper = lower + float(p)
                    following[here & (u >= lower) & (u < upper)] = target
                    lower = upper
            state[alive] = following
            alive = alive[following != ChainState.ABSORBED]
        return r0, r2

    def chain_tv(self, params: ChainParams, r0: np.ndarray, r2: np.ndarray,
                 truncation: int = 10) -> float:
        """Distância de variação total entre a lei exata e a empírica, truncada"""
        trials = len(r0)
        inside = (r0 <= truncation) & (r2 <= truncation)
        empirical = np.zeros((truncation + 1, truncation + 1))
        np.add.at(empirical, (r0[inside], r2[inside]), 1)
        empirical /= trials
        exact = np.zeros_like(empirical)
        for k2 in range(1, truncation + 1):
            for k0 in range(1, k2 + 1):
                exact[k0, k2] = float(self.chain_law(params, k0, k2))
        outside_gap = abs((1 - exact.sum()) - (1 - inside.mean()))
        return 0.5 * (np.abs(empirical - exact).sum() + outside_gap)

    # busca de caminhos abertos

    def search_open_monotone_path(self, d: int, k: int, radius: int, src: LazyAgeSource,
                                  budget: Optional[int] = None) -> CrossingResult:
        """DFS sobre extensões monótonas abertas a partir da origem"""
        if d < 1 or radius < 1:
            raise ValueError(f"Exige d >= 1 e raio >= 1: d={d}, raio={radius}")
        budget = budget or settings.limits.node_budget
        origin = (0,) * d
        if not layers_service.lattice_layer_of(src, origin, k):
            return CrossingResult(crossed=False, longest_path=(), explored=1)
        parent: Dict[LatticePoint, Optional[LatticePoint]] = {origin: None}
        stack = [origin]
        deepest = origin
        explored = 0
        while stack:
            p = stack.pop()
            explored += 1
            if explored > budget:
                raise BudgetExhausted(f"Orçamento de {budget} nós esgotado (d={d}, k={k})")
            if l1_norm(p) > l1_norm(deepest):
                deepest = p
            if l1_norm(p) >= radius:
                break
            for j in reversed(range(d)):
                q = lattice_step(p, j)
                if q in parent:
                    continue
                if layers_service.lattice_layer_of(src, q, k):
                    parent[q] = p
                    stack.append(q)
        path = [deepest]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        crossed = l1_norm(deepest) >= radius
        logger.debug(f"Busca d={d}, k={k}: cruzou={crossed}, nós={explored}")
        return CrossingResult(crossed=crossed, longest_path=tuple(reversed(path)), explored=explored)


lattice_service = LatticeService()
