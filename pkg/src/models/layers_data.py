"""
Modelos do modelo de camadas: idades, camadas, subgrafos T_k e idades preguiçosas
"""
import struct
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict

import numpy as np
from cryptography.hazmat.primitives import hashes, hmac

from .graph_data import Graph, LatticePoint

AGE_SPACE = 2 ** 64


@dataclass(frozen=True, eq=False)
class AgeAssignment:
    """Idades injetivas por vértice: ranks de permutação ou valores uniformes"""
    values: np.ndarray

    @classmethod
    def from_order(cls, order) -> "AgeAssignment":
        """Idades a partir de uma ordem total (primeiro = mais novo)"""
        order = np.asarray(order, dtype=np.int64)
        ranks = np.empty(len(order), dtype=np.int64)
        ranks[order] = np.arange(len(order))
        return cls(ranks)

    @property
    def n(self) -> int:
        return len(self.values)

    @cached_property
    def ranks(self) -> np.ndarray:
        """Ranks 0..n-1 da ordem induzida"""
        ranks = np.empty(self.n, dtype=np.int64)
        ranks[np.argsort(self.values, kind="stable")] = np.arange(self.n)
        return ranks

    def is_injective(self) -> bool:
        return len(np.unique(self.values)) == self.n

    def younger(self, u: int, v: int) -> bool:
        """True se u é mais novo que v"""
        return self.values[u] < self.values[v]


@dataclass(frozen=True, eq=False)
class LayerResult:
    """Índice de camada l(v) = 1 + número de vizinhos mais novos"""
    layers: np.ndarray

    def layer_of(self, v: int) -> int:
        return int(self.layers[v])

    def open_mask(self, k: int) -> np.ndarray:
        return self.layers <= k

    def members(self, i: int) -> np.ndarray:
        """Vértices da camada L_i"""
        return np.flatnonzero(self.layers == i)

    def histogram(self, max_layer: int) -> np.ndarray:
        return np.bincount(self.layers, minlength=max_layer + 1)[1:max_layer + 1]


@dataclass(frozen=True, eq=False)
class TkSubgraph:
    """Subgrafo induzido T_k com o mapa para os rótulos originais"""
    k: int
    vertices: np.ndarray
    graph: Graph

    def contains(self, v: int) -> bool:
        idx = np.searchsorted(self.vertices, v)
        return idx < len(self.vertices) and self.vertices[idx] == v

    def original(self, u: int) -> int:
        return int(self.vertices[u])

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(eq=False)
class LazyAgeSource:
    """Idades determinísticas de pontos de Z^d via HMAC-SHA256 com a semente como chave"""
    seed: int
    memoize: bool = True
    memo: Dict[LatticePoint, int] = field(default_factory=dict, repr=False)

    @cached_property
    def _mac(self) -> hmac.HMAC:
        key = (self.seed % AGE_SPACE).to_bytes(8, "little")
        return hmac.HMAC(key, hashes.SHA256())

    def age(self, p: LatticePoint) -> int:
        """Idade de 64 bits do ponto p (memorizada)"""
        cached = self.memo.get(p)
        if cached is not None:
            return cached
        mac = self._mac.copy()
        mac.update(struct.pack(f"<{len(p)}q", *p))
        value = int.from_bytes(mac.finalize()[:8], "little")
        if self.memoize:
            self.memo[p] = value
        return value

    def normalized(self, p: LatticePoint) -> float:
        return self.age(p) / AGE_SPACE

    def clear(self):
        self.memo.clear()

    def __getstate__(self):
        state = self.__dict__.copy()
        state.pop("_mac", None)
        return state
