"""
Modelos da rede Z^d: pares de passeios monótonos, cadeia auxiliar e busca de caminhos abertos
"""
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .graph_data import LatticePoint

CENSORED = -1


@dataclass(frozen=True, eq=False)
class WalkPairStats:
    """Tempos de encontro tau (CENSORED se após o horizonte) e interseções por par"""
    d: int
    horizon: int
    tau: np.ndarray
    intersections: np.ndarray

    @property
    def trials(self) -> int:
        return len(self.tau)

    def tau_frequency(self, t: int) -> float:
        return float(np.mean(self.tau == t))

    def censored_fraction(self) -> float:
        return float(np.mean(self.tau == CENSORED))


@dataclass(frozen=True)
class LatticeBlockOutcome:
    """Eventos A_i(gamma) na rede e as contagens M_j"""
    blocks: Tuple[bool, ...]
    m_counts: Tuple[int, ...]

    @property
    def occurs(self) -> bool:
        return all(self.blocks)


class ChainState(IntEnum):
    """Estados da cadeia auxiliar (ABSORBED representa inf)"""
    ZERO = 0
    TWO = 2
    FOUR = 4
    ABSORBED = -1


@dataclass(frozen=True)
class ChainParams:
    """Parâmetros exatos da cadeia {0, 2, 4, inf} e dos pesos p_0, p_2"""
    d: int
    q20: Fraction
    q42: Fraction
    a_prime: Fraction

    @property
    def q24(self) -> Fraction:
        return 1 - self.q20

    @property
    def q4inf(self) -> Fraction:
        return 1 - self.q42

    @property
    def p0(self) -> Fraction:
        return Fraction(self.d) / (self.a_prime - 1)

    @property
    def p2_ratio(self) -> Fraction:
        """Razão 9/(a'(2d-7)) da série geométrica de p_2"""
        return Fraction(9) / (self.a_prime * (2 * self.d - 7))

    @property
    def p2(self) -> Fraction:
        return (Fraction(3 * self.d) / (self.a_prime * (2 * self.d - 7))) / (1 - self.p2_ratio)


@dataclass(frozen=True)
class CrossingResult:
    """Resultado da busca de caminho monótono aberto a partir da origem"""
    crossed: bool
    longest_path: Tuple[LatticePoint, ...]
    explored: int

    @property
    def longest_length(self) -> int:
        return max(len(self.longest_path) - 1, 0)


@dataclass(frozen=True)
class PairProbabilities:
    """Estimativas condicionais a_2, p_12, p_123, p_1234"""
    d: int
    trials: int
    a2: float
    p12: float
    p123: float
    p1234: float
    hits: Tuple[int, int, int, int]

    def scaled(self) -> dict:
        """Estimativas multiplicadas por d^2 (referências 1, 1, 2, 4)"""
        d2 = self.d ** 2
        return {"a2": self.a2 * d2, "p12": self.p12 * d2,
                "p123": self.p123 * d2, "p1234": self.p1234 * d2}

    def ratio(self, name: str) -> Optional[float]:
        value = getattr(self, name)
        return value / self.p12 if self.p12 > 0 else None


@dataclass(frozen=True, eq=False)
class IntersectionTail:
    """Cauda empírica P(|gamma ^ gamma'| >= k) e a estimativa alpha"""
    d: int
    horizon: int
    k: np.ndarray
    tail: np.ndarray
    stderr: np.ndarray
    alpha_hat: float

    def to_rows(self) -> list:
        return [[int(k), float(p), float(s)] for k, p, s in zip(self.k, self.tail, self.stderr)]
