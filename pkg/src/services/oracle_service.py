"""
Oráculo exato por permutações
Toda probabilidade de evento que depende só da ordem das idades
"""
import logging
import math
from fractions import Fraction
from itertools import permutations
from typing import Callable, Dict, Hashable, Optional, Sequence

from ..config.settings import settings
from ..models.errors import TooLarge

logger = logging.getLogger(__name__)

OrderPredicate = Callable[[Dict[Hashable, int]], bool]


class PermutationOracle:
    """Enumera as ordens totais dos vértices relevantes (rank menor = mais novo)"""

    def __init__(self, max_vertices: Optional[int] = None):
        self.max_vertices = max_vertices or settings.limits.oracle_max_vertices

    def probability(self, vertices: Sequence[Hashable], predicate: OrderPredicate) -> Fraction:
        """Fração exata das ordens que satisfazem o predicado"""
        vertices = list(dict.fromkeys(vertices))
        if len(vertices) > self.max_vertices:
            raise TooLarge(f"{len(vertices)} vértices relevantes (limite {self.max_vertices})")
        hits = 0
        for order in permutations(range(len(vertices))):
            if predicate(dict(zip(vertices, order))):
                hits += 1
        total = math.factorial(len(vertices))
        logger.debug(f"Oráculo: {hits}/{total} ordens")
        return Fraction(hits, total)


permutation_oracle = PermutationOracle()
