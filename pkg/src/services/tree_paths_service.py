"""
Serviço de caminhos em árvores
Eventos de caminhos bons e 'nice', probabilidades exatas, Z_k e condição de crescimento
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..config.settings import settings
from ..models.errors import BadConfig, DegreeTooSmall, EnumerationTooLarge
from ..models.experiment_data import Estimate
from ..models.graph_data import RootedTree
from ..models.layers_data import AgeAssignment, LayerResult
from ..models.path_data import (BlockPosition, GoodEventOutcome, GrowthReport, NiceConfig,
                                NiceOutcome, TreePath, block_position)
from .graph_service import graph_service
from .layers_service import layers_service

logger = logging.getLogger(__name__)

Ages = Union[AgeAssignment, Mapping[int, int]]


def _age_table(ages: Ages):
    if isinstance(ages, AgeAssignment):
        return ages.values.tolist()
    return ages


def block_holds(position: BlockPosition, k_a: int, k_b: int, a_younger: bool) -> bool:
    """Critério do bloco: M no interior, K nas pontas"""
    if position is BlockPosition.INTERIOR:
        return max(k_a + (not a_younger), k_b + a_younger) <= 1
    if position is BlockPosition.FIRST:
        return k_a <= 1 and k_b == 0
    if position is BlockPosition.LAST:
        return k_a == 0 and k_b <= 1
    return k_a <= 1 and k_b <= 1


@lru_cache(maxsize=None)
def _marginal(x: int, y: int, position: BlockPosition) -> Fraction:
    if position is BlockPosition.INTERIOR:
        cross = Fraction(1, (x + y - 2) * (x + y - 3))
        return Fraction(1, (x - 1) * (y - 1)) + cross * (Fraction(x - 2, y - 1) + Fraction(y - 2, x - 1))
    if position is BlockPosition.FIRST:
        return Fraction(2, x * (y - 1))
    if position is BlockPosition.LAST:
        return Fraction(2, (x - 1) * y)
    return Fraction(2, x) * Fraction(2, y)


class TreePathsService:
    """Caminhos bons em árvores enraizadas"""

    def make_path(self, t: RootedTree, vertices: Sequence[int]) -> TreePath:
        """TreePath com os conjuntos N_i(gamma) e graus nominais"""
        members = set(vertices)
        adj = t.graph.adjacency
        outside = tuple(tuple(w for w in adj[v] if w not in members) for v in vertices)
        return TreePath(vertices=tuple(vertices), outside=outside,
                        degrees=tuple(t.degree(v) for v in vertices))

    def enumerate_root_paths(self, t: RootedTree, length: int) -> List[TreePath]:
        """Todos os caminhos simples com length arestas a partir da raiz"""
        if length < 1:
            raise ValueError(f"Comprimento deve ser >= 1: {length}")
        cap = settings.limits.enumeration_cap
        adj = t.graph.adjacency
        paths = []
        stack = [(t.root,)]
        while stack:
            path = stack.pop()
            if len(path) == length + 1:
                paths.append(self.make_path(t, path))
                if len(paths) > cap:
                    raise EnumerationTooLarge(f"Mais de {cap} caminhos de comprimento {length}")
                continue
            for w in reversed(adj[path[-1]]):
                if w not in path:
                    stack.append(path + (w,))
        logger.debug(f"{len(paths)} caminhos de comprimento {length} enumerados")
        return paths

    def check_good(self, gamma: TreePath, ages: Ages) -> GoodEventOutcome:
        """Avalia A_1(gamma), ..., A_k(gamma) numa atribuição de idades"""
        if len(gamma.vertices) % 2:
            raise ValueError("Caminho bom precisa de um número par de vértices")
        age = _age_table(ages)
        younger = [sum(1 for w in out if age[w] < age[v])
                   for v, out in zip(gamma.vertices, gamma.outside)]
        blocks = []
        for i in range(1, gamma.k + 1):
            a, b = gamma.vertices[2 * i - 2], gamma.vertices[2 * i - 1]
            blocks.append(block_holds(gamma.block_position(i), younger[2 * i - 2],
                                      younger[2 * i - 1], age[a] < age[b]))
        return GoodEventOutcome(blocks=tuple(blocks), weight=gamma.weight(),
                                probability=self.prob_Agamma(gamma))

    def block_event(self, gamma: TreePath, i: int):
        """Predicado de A_i(gamma) sobre ranks e os vértices de que depende"""
        ia, ib = 2 * i - 2, 2 * i - 1
        a, b = gamma.vertices[ia], gamma.vertices[ib]
        out_a, out_b = gamma.outside[ia], gamma.outside[ib]
        position = gamma.block_position(i)

        def predicate(rank: Mapping[int, int]) -> bool:
            k_a = sum(1 for w in out_a if rank[w] < rank[a])
            k_b = sum(1 for w in out_b if rank[w] < rank[b])
            return block_holds(position, k_a, k_b, rank[a] < rank[b])

        return (a, b) + out_a + out_b, predicate

    def marginal_Ai(self, x: int, y: int, position: BlockPosition) -> Fraction:
        """Pr[A_i(gamma)] exata para graus x, y do bloco"""
        if x < 2 or y < 2:
            raise DegreeTooSmall(f"Graus do bloco devem ser >= 2: ({x}, {y})")
        return _marginal(x, y, position)

    def interior_marginal_lower_bound(self, x: int, y: int) -> Fraction:
        """4/(3(x-1)(y-1)), válida quando o bloco tem grau > 2"""
        if x < 2 or y < 2 or max(x, y) <= 2:
            raise DegreeTooSmall(f"Cota exige graus >= 2 e algum > 2: ({x}, {y})")
        return Fraction(4, 3 * (x - 1) * (y - 1))

    def claim_f(self, x: int, y: int) -> Fraction:
        if x < 2 or y < 2:
            raise DegreeTooSmall(f"f exige x, y >= 2: ({x}, {y})")
        return Fraction((x - 1) * (x - 2) + (y - 1) * (y - 2), (x + y - 2) * (x + y - 3))

    def minimize_claim_f(self, bound: int) -> Tuple[Tuple[int, int], Fraction]:
        """Mínimo de f na grade 3 <= x, y <= bound"""
        if bound < 3:
            raise ValueError(f"Limite da grade deve ser >= 3: {bound}")
        best, best_value = None, None
        for x in range(3, bound + 1):
            for y in range(3, bound + 1):
                value = self.claim_f(x, y)
                if best_value is None or value < best_value:
                    best, best_value = (x, y), value
        return best, best_value

    def prob_Agamma(self, gamma: TreePath) -> Fraction:
        """Produto das marginais dos blocos (independentes numa árvore)"""
        p = Fraction(1)
        for i in range(1, gamma.k + 1):
            x, y = gamma.block_degrees(i)
            p *= self.marginal_Ai(x, y, gamma.block_position(i))
        return p

    def b_pair_vertices(self, t: RootedTree, gamma: TreePath,
                        other: TreePath) -> List[Tuple[int, Tuple[int, ...], int]]:
        """Vértices do evento B_{gamma,gamma'}: (u, vizinhos fora de gamma U gamma', m_u)"""
        if gamma.vertices == other.vertices or len(gamma.vertices) != len(other.vertices):
            raise ValueError("Caminhos devem ser distintos e de mesmo comprimento")
        j = gamma.meet_index(other)
        if j == 0:
            raise ValueError("Caminhos não partem da mesma raiz")
        if j % 2:
            chosen = [gamma.vertices[j - 1], gamma.vertices[j], other.vertices[j]]
        else:
            chosen = [gamma.vertices[j - 2], gamma.vertices[j - 1]]
        union = set(gamma.vertices) | set(other.vertices)
        adj = t.graph.adjacency
        out = []
        for u in chosen:
            inside = sum(1 for w in adj[u] if w in union)
            out.append((u, tuple(w for w in adj[u] if w not in union), t.degree(u) - inside))
        return out

    def prob_B_pair(self, t: RootedTree, gamma: TreePath, other: TreePath) -> Fraction:
        """Pr[B_{gamma,gamma'}] exata, vértice a vértice"""
        p = Fraction(1)
        for u, _, m in self.b_pair_vertices(t, gamma, other):
            if m < 0:
                raise DegreeTooSmall(f"Grau {t.degree(u)} pequeno demais no vértice {u}")
            p *= Fraction(min(2, m + 1), m + 1)
        return p

    def prob_B_pair_display(self, t: RootedTree, gamma: TreePath, other: TreePath) -> Fraction:
        """Forma fechada em cinco casos (produto de 2/(m_u+1))"""
        p = Fraction(1)
        for u, _, m in self.b_pair_vertices(t, gamma, other):
            if m + 1 <= 0:
                raise DegreeTooSmall(f"Divisor não positivo no vértice {u} (grau {t.degree(u)})")
            p *= Fraction(2, m + 1)
        return p

    def good_paths(self, t: RootedTree, ages: AgeAssignment, k: int,
                   layers: Optional[LayerResult] = None) -> List[Tuple[int, ...]]:
        """Caminhos bons com 2k vértices, por DFS podada bloco a bloco"""
        if layers is None:
            layers = layers_service.compute_layers(t.graph, ages)
        age = ages.values.tolist()
        younger_total = (layers.layers - 1).tolist()
        adj = t.graph.adjacency
        size = 2 * k

        def k_count(path, j):
            v = path[j]
            c = younger_total[v]
            if j > 0 and age[path[j - 1]] < age[v]:
                c -= 1
            if j + 1 < len(path) and age[path[j + 1]] < age[v]:
                c -= 1
            return c

        def holds(path, i, ia):
            return block_holds(block_position(i, k), k_count(path, ia), k_count(path, ia + 1),
                               age[path[ia]] < age[path[ia + 1]])

        found = []
        stack = [(t.root,)]
        while stack:
            path = stack.pop()
            m = len(path)
            if m >= 3 and m % 2 and not holds(path, (m - 1) // 2, m - 3):
                continue
            if m == size:
                if holds(path, k, m - 2):
                    found.append(path)
                continue
            previous = path[-2] if m > 1 else -1
            for w in adj[path[-1]]:
                if w != previous:
                    stack.append(path + (w,))
        return found

    def realized_Zk(self, t: RootedTree, ages: AgeAssignment, k: int) -> Fraction:
        """Z_k = soma de w(gamma) 1_{A_gamma} / Pr[A_gamma]"""
        if t.depth < 2 * k:
            raise ValueError(f"Árvore de profundidade {t.depth} insuficiente para k={k}")
        z = Fraction(0)
        for path in self.good_paths(t, ages, k):
            gamma = self.make_path(t, path)
            z += gamma.weight() / self.prob_Agamma(gamma)
        return z

    def is_k_good(self, t: RootedTree, ages: AgeAssignment, k: int) -> bool:
        return self.realized_Zk(t, ages, k) >= Fraction(1, 2)

    def sample_Zk(self, t: RootedTree, k: int, rng: np.random.Generator) -> Fraction:
        return self.realized_Zk(t, layers_service.sample_ages(t.graph, rng), k)

    def weight_through(self, t: RootedTree, v: int) -> Fraction:
        """W(v): peso total dos caminhos que passam por v"""
        path = t.root_path(v)
        if len(path) == 1:
            return Fraction(1)
        denominator = t.degree(path[0])
        for u in path[1:-1]:
            denominator *= t.degree(u) - 1
        return Fraction(1, denominator)

    def second_moment_summary(self, zs: Sequence[float]) -> Dict[str, float]:
        """E[Z_k], E[Z_k^2] e a cota de Paley-Zygmund para P(Z_k >= 1/2)"""
        arr = np.asarray(zs, dtype=float)
        mean = Estimate.from_samples(arr)
        second = Estimate.from_samples(arr ** 2)
        bound = 0.25 * mean.mean ** 2 / second.mean if second.mean > 0 else 0.0
        return {"mean": mean.mean, "mean_stderr": mean.stderr, "second_moment": second.mean,
                "second_moment_stderr": second.stderr, "pz_bound": bound,
                "good_fraction": float(np.mean(arr >= 0.5)) if len(arr) else math.nan}

    def _q_values(self, t: RootedTree) -> np.ndarray:
        level, nominal = t.level, t.nominal_degree
        parent = np.where(t.parent < 0, t.root, t.parent)
        big = np.maximum(nominal, nominal[parent]) > 2
        flag = ((level % 2 == 1) & (level >= 3) & big).astype(np.int64)
        prefix = np.zeros(t.graph.n, dtype=np.int64)
        for r in range(1, t.depth + 1):
            members = t.vertices_at_level(r)
            prefix[members] = prefix[parent[members]] + flag[members]
        up2 = parent[parent]
        q = np.where(level % 2 == 1, prefix[up2], prefix[parent[up2]])
        return np.where(level >= 3, q, 0)

    def growth_condition_holds(self, t: RootedTree, C: float, a: float) -> GrowthReport:
        """Verifica d_v - 1 <= C a^{q_v} d_o em todos os vértices gerados"""
        if not 1 <= a < 4 / 3:
            raise ValueError(f"a fora de [1, 4/3): {a}")
        q = self._q_values(t)
        bound = C * np.power(float(a), q) * t.degree(t.root)
        violating = np.flatnonzero(t.nominal_degree - 1 > bound)
        if len(violating):
            v = int(violating[0])
            logger.info(f"Condição de crescimento violada no vértice {v} (nível {t.level[v]})")
            return GrowthReport(holds=False, witness=v, q=int(q[v]), checked=t.graph.n)
        return GrowthReport(holds=True, checked=t.graph.n)

    def level_growth_holds(self, t: RootedTree, C: float, a: float) -> GrowthReport:
        """Versão por níveis: grau máximo no nível r <= C a^r, com a < raiz(4/3)"""
        if not 1 <= a < math.sqrt(4 / 3):
            raise ValueError(f"a fora de [1, sqrt(4/3)): {a}")
        max_degree = np.zeros(t.depth + 1, dtype=np.int64)
        np.maximum.at(max_degree, t.level, t.nominal_degree)
        levels = np.arange(t.depth + 1)
        violating = np.flatnonzero(max_degree > C * np.power(float(a), levels))
        if len(violating):
            r = int(violating[0])
            members = t.vertices_at_level(r)
            v = int(members[np.argmax(t.nominal_degree[members])])
            return GrowthReport(holds=False, witness=v, checked=t.depth + 1)
        return GrowthReport(holds=True, checked=t.depth + 1)

    def check_nice_and_W(self, t: RootedTree, ages: AgeAssignment, cfg: NiceConfig) -> NiceOutcome:
        """Caminhos 'nice' de comprimento k e |W_{o,k}|"""
        if cfg.k % 2 == 0 or cfg.k < 15:
            raise BadConfig(f"k deve ser ímpar e >= 15: {cfg.k}")
        marked = sorted(cfg.marked)
        for i, u in enumerate(marked):
            dist = graph_service.bfs_distance(t.graph, u)
            if (dist[marked[i + 1:]] < cfg.min_dist).any():
                raise BadConfig(f"Vértices marcados a distância < {cfg.min_dist} de {u}")
        if t.depth < cfg.k + 1:
            raise ValueError(f"Árvore de profundidade {t.depth} insuficiente para k={cfg.k}")
        region = np.flatnonzero(t.level <= cfg.k)
        thin = [int(v) for v in region if t.degree(int(v)) < 3 and int(v) not in cfg.marked]
        if thin:
            raise BadConfig(f"Vértice {thin[0]} fora de I com grau < 3")
        layers = layers_service.compute_layers(t.graph, ages)
        good = self.good_paths(t, ages, (cfg.k + 1) // 2, layers)
        flags = tuple(all(layers.layers[v] <= 2 for v in path if v in cfg.marked) for path in good)
        w = set()
        for path, nice in zip(good, flags):
            if nice:
                w.update(path)
        return NiceOutcome(nice=flags, w_size=len(w), good_count=len(good))

    def nice_w_summary(self, w_sizes: Sequence[int], k: int) -> Dict[str, float]:
        """Maior b observado com |W_{o,k}| > b^k e frequência de W não vazio"""
        arr = np.asarray(w_sizes, dtype=float)
        return {"b_hat": float(arr.max() ** (1 / k)) if len(arr) else math.nan,
                "nonempty": float(np.mean(arr > 0)) if len(arr) else math.nan}


tree_paths_service = TreePathsService()
