"""
Modelos de caminhos: caminhos bons em árvores, caminhos restritos em T_2
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, Optional, Tuple

import numpy as np

from .layers_data import TkSubgraph


class BlockPosition(Enum):
    """Posição do bloco (gamma_{2i-1}, gamma_{2i}) no caminho"""
    FIRST = "first"
    INTERIOR = "interior"
    LAST = "last"
    SINGLE = "single"


def block_position(i: int, k: int) -> BlockPosition:
    """Posição do bloco i (1-indexado) num caminho de k blocos"""
    if k == 1:
        return BlockPosition.SINGLE
    if i == 1:
        return BlockPosition.FIRST
    if i == k:
        return BlockPosition.LAST
    return BlockPosition.INTERIOR


@dataclass(frozen=True)
class TreePath:
    """Caminho simples gamma_1 = o, ..., gamma_{2k} a partir da raiz"""
    vertices: Tuple[int, ...]
    outside: Tuple[Tuple[int, ...], ...]
    degrees: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def k(self) -> int:
        return len(self.vertices) // 2

    def block_position(self, i: int) -> BlockPosition:
        return block_position(i, self.k)

    def block_degrees(self, i: int) -> Tuple[int, int]:
        return self.degrees[2 * i - 2], self.degrees[2 * i - 1]

    def weight(self) -> Fraction:
        """w(gamma) = (1/d_o) prod_{i=2}^{2k-1} 1/(d_i - 1)"""
        w = Fraction(1, self.degrees[0])
        for d in self.degrees[1:-1]:
            w /= d - 1
        return w

    def meet_index(self, other: "TreePath") -> int:
        """|gamma ^ gamma'|: número de vértices iniciais em comum"""
        j = 0
        for a, b in zip(self.vertices, other.vertices):
            if a != b:
                break
            j += 1
        return j


@dataclass(frozen=True)
class GoodEventOutcome:
    """Resultado dos eventos A_i(gamma) numa amostra"""
    blocks: Tuple[bool, ...]
    weight: Fraction
    probability: Fraction

    @property
    def good(self) -> bool:
        return all(self.blocks)

    @property
    def y(self) -> Fraction:
        """Y_gamma = w(gamma) 1_{A_gamma} / Pr[A_gamma]"""
        return self.weight / self.probability if self.good else Fraction(0)


@dataclass(frozen=True)
class NiceConfig:
    """Conjunto marcado I e comprimento ímpar k dos caminhos 'nice'"""
    marked: FrozenSet[int]
    k: int
    min_dist: int = 15


@dataclass(frozen=True)
class NiceOutcome:
    """Indicador 'nice' de cada caminho bom e |W_{o,k}|"""
    nice: Tuple[bool, ...]
    w_size: int
    good_count: int

    @property
    def nice_count(self) -> int:
        return sum(self.nice)


@dataclass(frozen=True)
class GrowthReport:
    """Resultado da condição de crescimento d_v - 1 <= C a^{q_v} d_o"""
    holds: bool
    witness: Optional[int] = None
    q: Optional[int] = None
    checked: int = 0


@dataclass(frozen=True)
class RestrictedPath:
    """Caminho de Gamma'_{v,n}: sem cordas, graus internos >= 2"""
    vertices: Tuple[int, ...]
    degrees: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]


@dataclass(frozen=True, eq=False)
class T2Structure:
    """T_2 amostrado, mínimos por componente e orientação das arestas por idade"""
    subgraph: TkSubgraph
    forest: bool
    monotone: bool
    component_minima: np.ndarray
    orientation: np.ndarray
    counterexample: Optional[Tuple[int, ...]] = None

    @property
    def ok(self) -> bool:
        return self.forest and self.monotone


@dataclass(frozen=True)
class RecurrenceCheck:
    """Somas exatas S_n e a verificação S_{n+1} <= S_n (n >= 2)"""
    sums: Tuple[Fraction, ...]
    path_counts: Tuple[int, ...]
    non_increasing: bool
    first_violation: Optional[int] = None

    def to_rows(self) -> list:
        """Linhas (n, caminhos, S_n exato, S_n decimal)"""
        return [[n, count, str(s), float(s)]
                for n, (s, count) in enumerate(zip(self.sums, self.path_counts), start=1)]
