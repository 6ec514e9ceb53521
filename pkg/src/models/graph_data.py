"""
Modelos de grafos: grafo simples, multigrafo, árvore enraizada e sequência de graus
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import DuplicateEdge, EndpointOutOfRange, OddDegreeSum, SelfLoop

LatticePoint = Tuple[int, ...]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Graph:
    """Grafo simples não direcionado em formato CSR, vizinhos ordenados"""
    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], n: int) -> "Graph":
        """Monta o grafo rejeitando laços, arestas duplicadas e extremos inválidos"""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 2)
        if arr.size:
            outside = (arr < 0).any(axis=1) | (arr >= n).any(axis=1)
            if outside.any():
                u, v = arr[outside][0]
                raise EndpointOutOfRange(f"Aresta ({u}, {v}) fora do intervalo 0..{n - 1}")
            loops = arr[:, 0] == arr[:, 1]
            if loops.any():
                raise SelfLoop(f"Laço no vértice {arr[loops][0, 0]}")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        codes, counts = np.unique(lo * max(n, 1) + hi, return_counts=True)
        if (counts > 1).any():
            code = int(codes[counts > 1][0])
            raise DuplicateEdge(f"Aresta duplicada ({code // n}, {code % n})")
        return cls.from_canonical(lo, hi, n)

    @classmethod
    def from_canonical(cls, lo: np.ndarray, hi: np.ndarray, n: int) -> "Graph":
        """Monta o CSR a partir de arestas já validadas (lo < hi, sem repetição)"""
        src = np.concatenate([lo, hi]).astype(np.int64)
        dst = np.concatenate([hi, lo]).astype(np.int64)
        order = np.lexsort((dst, src))
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(n=n, indptr=_frozen(indptr), indices=_frozen(dst[order]))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_canonical(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), n)

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """Converte um grafo networkx com rótulos 0..n-1"""
        n = g.number_of_nodes()
        edges = np.array(list(g.edges()), dtype=np.int64).reshape(-1, 2)
        return cls.from_edges(edges, n)

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.diff(self.indptr))

    @cached_property
    def sources(self) -> np.ndarray:
        """Vértice de origem de cada entrada de indices"""
        return _frozen(np.repeat(np.arange(self.n, dtype=np.int64), self.degrees))

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """Listas de adjacência como tuplas Python (acesso rápido em buscas)"""
        if not self.n:
            return ()
        return tuple(tuple(row.tolist()) for row in np.split(self.indices, self.indptr[1:-1]))

    @cached_property
    def neighbor_sets(self) -> Tuple[frozenset, ...]:
        return tuple(frozenset(row) for row in self.adjacency)

    @cached_property
    def csr(self) -> sparse.csr_array:
        data = np.ones(len(self.indices), dtype=np.int8)
        return sparse.csr_array((data, self.indices, self.indptr), shape=(self.n, self.n))

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def edges(self) -> np.ndarray:
        """Arestas (u, v) com u < v"""
        src = self.sources
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def induced(self, vertices: np.ndarray) -> "Graph":
        """Subgrafo induzido, com vértices renumerados na ordem crescente"""
        vertices = np.asarray(vertices, dtype=np.int64)
        relabel = np.full(self.n, -1, dtype=np.int64)
        relabel[vertices] = np.arange(len(vertices))
        e = self.edges()
        keep = (relabel[e[:, 0]] >= 0) & (relabel[e[:, 1]] >= 0)
        return Graph.from_canonical(relabel[e[keep, 0]], relabel[e[keep, 1]], len(vertices))

    def assert_valid(self):
        """Confere simplicidade e simetria (usado em toda saída de gerador)"""
        src = self.sources
        assert not (src == self.indices).any(), "grafo com laço"
        if len(self.indices) > 1:
            increasing = np.diff(self.indices) > 0
            starts = self.indptr[1:-1]
            starts = starts[(starts > 0) & (starts < len(self.indices))]
            increasing[starts - 1] = True
            assert increasing.all(), "vizinhos repetidos ou fora de ordem"
        assert (self.csr != self.csr.T).nnz == 0, "adjacência não simétrica"

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(map(tuple, self.edges().tolist()))
        return g

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": self.edges().tolist()}


@dataclass(frozen=True, eq=False)
class MultiGraph:
    """Multigrafo com laços e arestas paralelas (modelo de configuração)"""
    n: int
    edges: np.ndarray

    @cached_property
    def degrees(self) -> np.ndarray:
        """Graus com laços contados duas vezes"""
        return np.bincount(self.edges.ravel(), minlength=self.n)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def multiplicities(self) -> Dict[Tuple[int, int], int]:
        """Multiplicidade de cada par {u, v} (laços como (v, v))"""
        lo = np.minimum(self.edges[:, 0], self.edges[:, 1])
        hi = np.maximum(self.edges[:, 0], self.edges[:, 1])
        pairs, counts = np.unique(np.column_stack([lo, hi]), axis=0, return_counts=True)
        return {(int(u), int(v)): int(c) for (u, v), c in zip(pairs, counts)}

    @property
    def loop_count(self) -> int:
        return int((self.edges[:, 0] == self.edges[:, 1]).sum())

    def is_simple(self) -> bool:
        if self.loop_count:
            return False
        return all(c == 1 for c in self.multiplicities.values())


@dataclass(frozen=True, eq=False)
class RootedTree:
    """Árvore enraizada com pais, níveis e graus nominais da árvore infinita"""
    graph: Graph
    root: int
    parent: np.ndarray
    level: np.ndarray
    nominal_degree: np.ndarray

    @classmethod
    def from_graph(cls, graph: Graph, root: int = 0,
                   nominal_degree: Optional[np.ndarray] = None) -> "RootedTree":
        """Enraíza um grafo acíclico e conexo via BFS"""
        if graph.edge_count != graph.n - 1:
            raise ValueError("Grafo não é uma árvore")
        order, pred = csgraph.breadth_first_order(graph.csr, root, directed=False,
                                                  return_predecessors=True)
        if len(order) != graph.n:
            raise ValueError("Grafo não é conexo")
        level = np.zeros(graph.n, dtype=np.int64)
        for v in order[1:]:
            level[v] = level[pred[v]] + 1
        parent = np.where(pred < 0, -1, pred).astype(np.int64)
        parent[root] = -1
        nominal = graph.degrees.copy() if nominal_degree is None else np.asarray(nominal_degree)
        return cls(graph=graph, root=root, parent=_frozen(parent), level=_frozen(level),
                   nominal_degree=_frozen(nominal.astype(np.int64)))

    @property
    def depth(self) -> int:
        return int(self.level.max()) if self.graph.n else 0

    def degree(self, v: int) -> int:
        """Grau nominal (folhas da truncagem mantêm o grau da árvore infinita)"""
        return int(self.nominal_degree[v])

    def vertices_at_level(self, r: int) -> np.ndarray:
        return np.flatnonzero(self.level == r)

    def root_path(self, v: int) -> List[int]:
        """Caminho da raiz até v"""
        path = [v]
        while self.parent[path[-1]] >= 0:
            path.append(int(self.parent[path[-1]]))
        return path[::-1]


@dataclass(frozen=True)
class DegreeSequence:
    """Sequência de graus d_1 >= ... >= d_n com soma par"""
    values: Tuple[int, ...]

    def __post_init__(self):
        ordered = tuple(sorted((int(d) for d in self.values), reverse=True))
        if ordered and ordered[-1] < 0:
            raise ValueError(f"Grau negativo: {ordered[-1]}")
        if sum(ordered) % 2:
            raise OddDegreeSum(f"Soma de graus ímpar: {sum(ordered)}")
        object.__setattr__(self, "values", ordered)

    @classmethod
    def regular(cls, d: int, n: int) -> "DegreeSequence":
        return cls((d,) * n)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def max_degree(self) -> int:
        return self.values[0] if self.values else 0

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    def fractions(self) -> Dict[int, Fraction]:
        """Fração lambda_i de vértices com grau i"""
        counts: Dict[int, int] = {}
        for d in self.values:
            counts[d] = counts.get(d, 0) + 1
        return {d: Fraction(c, self.n) for d, c in sorted(counts.items())}


@dataclass(frozen=True)
class CycleCensus:
    """Contagens Y_i de ciclos de comprimento i = 1..k_max"""
    counts: Tuple[int, ...]

    @property
    def k_max(self) -> int:
        return len(self.counts)

    def y(self, i: int) -> int:
        return self.counts[i - 1]

    def to_dict(self) -> dict:
        return {f"Y_{i + 1}": c for i, c in enumerate(self.counts)}


def lattice_neighbors(p: LatticePoint) -> List[LatticePoint]:
    """Os 2d vizinhos de p em Z^d"""
    out = []
    for j in range(len(p)):
        for step in (-1, 1):
            q = list(p)
            q[j] += step
            out.append(tuple(q))
    return out


def lattice_step(p: LatticePoint, j: int, step: int = 1) -> LatticePoint:
    q = list(p)
    q[j] += step
    return tuple(q)


def l1_norm(p: LatticePoint) -> int:
    return sum(abs(x) for x in p)
