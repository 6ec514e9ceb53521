"""
Serviço de grafos
Geradores das famílias analisadas e primitivas de componentes e distâncias
"""
import logging
from collections import deque
from typing import Callable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import csgraph

from ..config.settings import settings
from ..models.errors import AttemptsExhausted, DepthZero, OddDegreeSum
from ..models.graph_data import DegreeSequence, Graph, MultiGraph, RootedTree

logger = logging.getLogger(__name__)

MAX_TREE_VERTICES = 5_000_000


def counterexample_levels(limit: int) -> List[int]:
    """Níveis especiais a_n = 2^(2^(2^n)), n >= 1, até limit"""
    levels = []
    n = 1
    while True:
        a_n = 2 ** (2 ** (2 ** n))
        if a_n > limit:
            return levels
        levels.append(a_n)
        n += 1


class GraphService:
    """Construção de grafos, geradores e consultas estruturais"""

    def build_graph(self, edge_list: Sequence[Tuple[int, int]], n: int) -> Graph:
        """Grafo simples a partir de lista de arestas"""
        g = Graph.from_edges(edge_list, n)
        g.assert_valid()
        return g

    def generate_spherically_symmetric_tree(self, degree_of_level: Callable[[int], int],
                                            depth: int) -> RootedTree:
        """Árvore esfericamente simétrica truncada no nível depth (rótulos em ordem BFS)"""
        if depth < 1:
            raise DepthZero(f"Profundidade inválida: {depth}")
        return self._grow_tree(lambda r, size: degree_of_level(r), depth)

    def counterexample_tree(self, depth: int) -> RootedTree:
        """Árvore com grau 3 (raiz 2) e grau |l_r|+1 nos níveis a_n"""
        if depth < 1:
            raise DepthZero(f"Profundidade inválida: {depth}")
        special = set(counterexample_levels(depth))

        def degree(r: int, size: int) -> int:
            if r in special:
                return size + 1
            return 2 if r == 0 else 3

        return self._grow_tree(degree, depth)

    def _grow_tree(self, degree: Callable[[int, int], int], depth: int) -> RootedTree:
        parents = [np.array([-1], dtype=np.int64)]
        levels = [np.zeros(1, dtype=np.int64)]
        nominal = [np.array([degree(0, 1)], dtype=np.int64)]
        current = np.zeros(1, dtype=np.int64)
        next_id = 1
        for r in range(depth):
            d = int(nominal[-1][0])
            if d < 1:
                raise ValueError(f"Grau {d} inválido no nível {r}")
            children = d if r == 0 else d - 1
            child_parents = np.repeat(current, children)
            if next_id + len(child_parents) > MAX_TREE_VERTICES:
                raise ValueError(f"Árvore excede {MAX_TREE_VERTICES} vértices no nível {r + 1}")
            ids = np.arange(next_id, next_id + len(child_parents), dtype=np.int64)
            next_id += len(ids)
            parents.append(child_parents)
            levels.append(np.full(len(ids), r + 1, dtype=np.int64))
            nominal.append(np.full(len(ids), degree(r + 1, len(ids)), dtype=np.int64))
            current = ids
        parent = np.concatenate(parents)
        child = np.arange(1, next_id, dtype=np.int64)
        graph = Graph.from_canonical(parent[1:], child, next_id)
        graph.assert_valid()
        tree = RootedTree(graph=graph, root=0, parent=parent, level=np.concatenate(levels),
                          nominal_degree=np.concatenate(nominal))
        logger.debug(f"Árvore gerada: {next_id} vértices, profundidade {depth}")
        return tree

    def configuration_multigraph(self, seq: DegreeSequence, rng: np.random.Generator) -> MultiGraph:
        """Emparelhamento uniforme das semi-arestas"""
        degrees = seq.as_array()
        if degrees.sum() % 2:
            raise OddDegreeSum(f"Soma de graus ímpar: {degrees.sum()}")
        stubs = np.repeat(np.arange(seq.n, dtype=np.int64), degrees)
        matched = rng.permutation(stubs).reshape(-1, 2)
        return MultiGraph(n=seq.n, edges=matched)

    def simple_graph_from_sequence(self, seq: DegreeSequence, rng: np.random.Generator,
                                   max_attempts: Optional[int] = None) -> Graph:
        """Rejeição sobre o modelo de configuração até obter grafo simples"""
        graph, _ = self.simple_graph_with_attempts(seq, rng, max_attempts)
        return graph

    def simple_graph_with_attempts(self, seq: DegreeSequence, rng: np.random.Generator,
                                   max_attempts: Optional[int] = None) -> Tuple[Graph, int]:
        """Como simple_graph_from_sequence, devolvendo também o número de tentativas"""
        max_attempts = max_attempts or settings.limits.max_attempts
        if max_attempts < 1:
            raise ValueError("max_attempts deve ser >= 1")
        n = seq.n
        for attempt in range(1, max_attempts + 1):
            edges = self.configuration_multigraph(seq, rng).edges
            lo = np.minimum(edges[:, 0], edges[:, 1])
            hi = np.maximum(edges[:, 0], edges[:, 1])
            if (lo == hi).any():
                continue
            if len(np.unique(lo * n + hi)) != len(lo):
                continue
            graph = Graph.from_canonical(lo, hi, n)
            graph.assert_valid()
            logger.debug(f"Grafo simples aceito na tentativa {attempt}")
            return graph, attempt
        raise AttemptsExhausted(f"Nenhum grafo simples em {max_attempts} tentativas")

    def erdos_renyi(self, n: int, p: float, rng: np.random.Generator) -> Graph:
        """G(n, p) via networkx com o gerador numpy como semente"""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p fora de [0, 1]: {p}")
        graph = Graph.from_networkx(nx.fast_gnp_random_graph(n, p, seed=rng))
        graph.assert_valid()
        return graph

    def cycle_graph(self, n: int) -> Graph:
        return self.build_graph([(i, (i + 1) % n) for i in range(n)], n)

    def path_graph(self, n: int) -> Graph:
        return self.build_graph([(i, i + 1) for i in range(n - 1)], n)

    def star_graph(self, m: int) -> Graph:
        """K_{1,m} com centro 0"""
        return self.build_graph([(0, i) for i in range(1, m + 1)], m + 1)

    def complete_graph(self, n: int) -> Graph:
        return self.build_graph([(i, j) for i in range(n) for j in range(i + 1, n)], n)

    def connected_components(self, g: Graph) -> Tuple[np.ndarray, np.ndarray]:
        """Rótulo de componente por vértice e tamanhos das componentes"""
        if g.n == 0:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        _, labels = csgraph.connected_components(g.csr, directed=False)
        return labels, np.bincount(labels)

    def largest_component_size(self, g: Graph) -> int:
        _, sizes = self.connected_components(g)
        return int(sizes.max()) if len(sizes) else 0

    def bfs_distance(self, g: Graph, source: int) -> np.ndarray:
        """Distâncias a partir de source (inf se inalcançável)"""
        if not 0 <= source < g.n:
            raise ValueError(f"Vértice de origem inválido: {source}")
        return csgraph.shortest_path(g.csr, directed=False, unweighted=True, indices=source)

    def ball(self, g: Graph, v: int, r: int) -> List[int]:
        """Vértices a distância <= r de v (BFS truncada)"""
        seen = {v: 0}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            if seen[u] == r:
                continue
            for w in g.adjacency[u]:
                if w not in seen:
                    seen[w] = seen[u] + 1
                    queue.append(w)
        return sorted(seen)

    def ball_is_tree(self, g: Graph, v: int, r: int) -> bool:
        """True se o subgrafo induzido pela bola de raio r é acíclico"""
        if r < 0:
            raise ValueError("Raio negativo")
        members = set(self.ball(g, v, r))
        edges = sum(1 for u in members for w in g.adjacency[u] if w in members) // 2
        return edges == len(members) - 1

    def distant_independent_set(self, g: Graph, min_dist: int, ball_radius: int) -> List[int]:
        """Guloso em ordem crescente de rótulo: distâncias >= min_dist e bolas acíclicas"""
        if min_dist < 1:
            raise ValueError("min_dist deve ser >= 1")
        blocked = np.zeros(g.n, dtype=bool)
        chosen = []
        for v in range(g.n):
            if blocked[v] or not self.ball_is_tree(g, v, ball_radius):
                continue
            chosen.append(v)
            blocked[self.ball(g, v, min_dist - 1)] = True
        logger.debug(f"Conjunto distante com {len(chosen)} vértices")
        return chosen


graph_service = GraphService()
