"""
Repositório de grafos
Leitura e escrita de listas de arestas e interpretação das especificações de geradores
"""
import logging
from pathlib import Path
from typing import Callable, List, Union

import numpy as np

from ..models.errors import BadConfig, IoFailure, OddDegreeSum
from ..models.graph_data import DegreeSequence, Graph, RootedTree
from ..services.graph_service import graph_service

logger = logging.getLogger(__name__)

GraphFamily = Callable[[int, np.random.Generator], Graph]

FAMILIES = ("regular", "mixed", "cycle", "path", "star", "complete", "empty", "er")


class GraphRepository:
    """Acesso a grafos em arquivo e por especificação textual"""

    def read_edge_list(self, path: Union[str, Path]) -> Graph:
        """Uma aresta 'u v' por linha; '# n=N' opcional inclui vértices isolados"""
        n = 0
        edges = []
        try:
            with open(path, encoding="utf-8") as handle:
                for number, raw in enumerate(handle, start=1):
                    line = raw.strip()
                    if not line:
                        continue
                    if line.startswith("#"):
                        key, _, value = line[1:].partition("=")
                        if key.strip() == "n":
                            n = max(n, int(value))
                        continue
                    parts = line.split()
                    if len(parts) != 2:
                        raise IoFailure(f"Linha {number} inválida em {path}: {line!r}")
                    u, v = int(parts[0]), int(parts[1])
                    edges.append((u, v))
                    n = max(n, u + 1, v + 1)
        except OSError as e:
            raise IoFailure(f"Erro ao ler {path}: {e}") from e
        except ValueError as e:
            raise IoFailure(f"Conteúdo inválido em {path}: {e}") from e
        logger.info(f"Lista de arestas lida: {n} vértices, {len(edges)} arestas")
        return graph_service.build_graph(edges, n)

    def write_edge_list(self, g: Graph, path: Union[str, Path]) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(f"# n={g.n}\n")
                for u, v in g.edges():
                    handle.write(f"{u} {v}\n")
        except OSError as e:
            raise IoFailure(f"Erro ao escrever {path}: {e}") from e
        return path

    def parse_degree_values(self, spec: str) -> List[int]:
        """'3' (regular) ou '3,4,5' (uniforme sobre os valores)"""
        try:
            values = [int(part) for part in spec.split(",") if part.strip()]
        except ValueError as e:
            raise BadConfig(f"Especificação de graus inválida: {spec!r}") from e
        if not values or min(values) < 0:
            raise BadConfig(f"Especificação de graus inválida: {spec!r}")
        return values

    def degree_sequence(self, spec: str, n: int, rng: np.random.Generator) -> DegreeSequence:
        """Sorteia n graus da especificação e corrige a paridade da soma"""
        values = self.parse_degree_values(spec)
        if n < 1:
            raise BadConfig(f"n deve ser >= 1: {n}")
        degrees = rng.choice(values, size=n) if len(values) > 1 else np.full(n, values[0])
        if degrees.sum() % 2:
            swap = [d for d in values if (d - degrees[-1]) % 2]
            if not swap:
                raise OddDegreeSum(f"Soma ímpar sem grau de paridade oposta em {spec!r} (n={n})")
            degrees[-1] = swap[0]
            logger.debug(f"Paridade corrigida: último grau passa a {swap[0]}")
        return DegreeSequence(tuple(int(d) for d in degrees))

    def family(self, spec: str) -> GraphFamily:
        """Família de grafos indexada por n: regular:d, mixed:3,4,5, cycle, path, star, complete, empty, er:c"""
        kind, _, arg = spec.partition(":")
        if kind not in FAMILIES:
            raise BadConfig(f"Família desconhecida: {spec!r}")
        if kind in ("regular", "mixed"):
            if not arg:
                raise BadConfig(f"Família {kind} exige graus: {spec!r}")
            values = self.parse_degree_values(arg)
            if kind == "regular" and len(values) != 1:
                raise BadConfig(f"Família regular exige um único grau: {spec!r}")
            return lambda n, rng: graph_service.simple_graph_from_sequence(
                self.degree_sequence(arg, n, rng), rng)
        if kind == "er":
            try:
                c = float(arg)
            except ValueError as e:
                raise BadConfig(f"Grau médio inválido: {spec!r}") from e
            return lambda n, rng: graph_service.erdos_renyi(n, min(c / n, 1.0), rng)
        fixed = {
            "cycle": graph_service.cycle_graph,
            "path": graph_service.path_graph,
            "star": graph_service.star_graph,
            "complete": graph_service.complete_graph,
            "empty": Graph.empty,
        }[kind]
        return lambda n, rng: fixed(n)

    def build(self, spec: str, rng: np.random.Generator) -> Graph:
        """Grafo único: família seguida de n (ex.: regular:3:100, star:4, er:2.5:1000) ou file:caminho"""
        if spec.startswith("file:"):
            return self.read_edge_list(spec[len("file:"):])
        if spec.startswith(("tree:", "counterexample:")):
            return self.tree(spec).graph
        family, _, size = spec.rpartition(":")
        try:
            n = int(size)
        except ValueError as e:
            raise BadConfig(f"Tamanho ausente em {spec!r}") from e
        return self.family(family)(n, rng)

    def degree_profile(self, spec: str) -> Callable[[int], int]:
        """Graus por nível: '3' constante, '3,4,5' cíclico"""
        values = self.parse_degree_values(spec)
        if min(values) < 1:
            raise BadConfig(f"Graus de árvore devem ser >= 1: {spec!r}")
        return lambda r: values[r % len(values)]

    def tree(self, spec: str) -> RootedTree:
        """tree:perfil:profundidade ou counterexample:profundidade"""
        parts = spec.split(":")
        try:
            depth = int(parts[-1])
        except ValueError as e:
            raise BadConfig(f"Profundidade ausente em {spec!r}") from e
        if parts[0] == "counterexample" and len(parts) == 2:
            return graph_service.counterexample_tree(depth)
        if parts[0] == "tree" and len(parts) == 3:
            return graph_service.generate_spherically_symmetric_tree(self.degree_profile(parts[1]), depth)
        raise BadConfig(f"Especificação de árvore inválida: {spec!r}")
