"""
Serviço do modelo de camadas
Amostra idades, calcula camadas e extrai os subgrafos T_k
"""
import logging
from fractions import Fraction
from typing import List

import numpy as np

from ..models.errors import TiesDetected
from ..models.graph_data import Graph, LatticePoint, lattice_neighbors
from ..models.layers_data import AgeAssignment, LayerResult, LazyAgeSource, TkSubgraph

logger = logging.getLogger(__name__)


class LayersService:
    """Idades, camadas e subgrafos induzidos T_k"""

    def sample_ages(self, g: Graph, rng: np.random.Generator) -> AgeAssignment:
        """Idades como ranks de uma permutação uniforme"""
        return AgeAssignment(rng.permutation(g.n).astype(np.int64))

    def compute_layers(self, g: Graph, ages: AgeAssignment) -> LayerResult:
        """l(v) = 1 + número de vizinhos mais novos, numa passada pela adjacência"""
        values = np.asarray(ages.values)
        if len(values) != g.n:
            raise ValueError(f"Idades para {len(values)} vértices, grafo com {g.n}")
        if not ages.is_injective():
            raise TiesDetected("Idades repetidas no grafo")
        younger = values[g.indices] < values[g.sources]
        counts = np.bincount(g.sources, weights=younger, minlength=g.n)
        return LayerResult(1 + counts.astype(np.int64))

    def extract_tk(self, g: Graph, layers: LayerResult, k: int) -> TkSubgraph:
        """Subgrafo induzido pelos vértices com l(v) <= k"""
        if k < 1:
            raise ValueError(f"k deve ser >= 1: {k}")
        vertices = np.flatnonzero(layers.open_mask(k))
        return TkSubgraph(k=k, vertices=vertices, graph=g.induced(vertices))

    def sample_tk(self, g: Graph, k: int, rng: np.random.Generator) -> TkSubgraph:
        """Amostra idades e devolve T_k"""
        ages = self.sample_ages(g, rng)
        return self.extract_tk(g, self.compute_layers(g, ages), k)

    def lazy_age(self, src: LazyAgeSource, p: LatticePoint) -> int:
        return src.age(p)

    def lattice_layer_index(self, src: LazyAgeSource, p: LatticePoint) -> int:
        """Camada de p em Z^d sob idades preguiçosas"""
        own = src.age(p)
        younger = 0
        for q in lattice_neighbors(p):
            age = src.age(q)
            if age == own:
                raise TiesDetected(f"Idades iguais em {p} e {q}")
            younger += age < own
        return 1 + younger

    def lattice_layer_of(self, src: LazyAgeSource, p: LatticePoint, k: int) -> bool:
        """True se p pertence a T_k(Z^d)"""
        if not p:
            raise ValueError("Dimensão deve ser >= 1")
        return self.lattice_layer_index(src, p) <= k

    def layer_marginal(self, m: int) -> Fraction:
        """Probabilidade de um vértice de grau m estar em cada camada L_i"""
        if m < 0:
            raise ValueError(f"Grau negativo: {m}")
        return Fraction(1, m + 1)

    def configuration_rows(self, ages: AgeAssignment, layers: LayerResult) -> List[list]:
        """Linhas (vértice, rank de idade, camada) para exportação"""
        return [[v, int(r), int(l)] for v, (r, l) in enumerate(zip(ages.ranks, layers.layers))]


layers_service = LayersService()
