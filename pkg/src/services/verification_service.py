"""
Serviço de verificação
Confronta as fórmulas fechadas com o oráculo de permutações e checa invariantes estruturais
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import numpy as np

from ..models.errors import InvariantViolation
from ..models.graph_data import Graph, RootedTree
from ..models.path_data import BlockPosition
from .graph_service import graph_service
from .lattice_service import lattice_service
from .layers_service import layers_service
from .oracle_service import PermutationOracle, permutation_oracle
from .random_graphs_service import random_graphs_service
from .t2_forest_service import t2_forest_service
from .tree_paths_service import tree_paths_service

logger = logging.getLogger(__name__)

DEGREES = (2, 3, 4, 5)
B_PAIR_PROFILES = ("3", "4", "5", "3,4,5", "5,4,3", "4,3")
B_EXACT_MAX_VERTICES = 8
PATH_2D = ((0, 0), (1, 0), (1, 1), (2, 1))
PATH_3D = ((0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1))
CORRELATION_PATHS = (PATH_2D[:2], PATH_2D)


@dataclass(frozen=True)
class CheckResult:
    """Resultado de uma verificação: valor esperado, observado e veredito"""
    check: str
    expected: str
    observed: str
    ok: bool

    def to_row(self) -> list:
        return [self.check, self.expected, self.observed, self.ok]


def _check(name: str, expected, observed) -> CheckResult:
    ok = expected == observed
    if not ok:
        logger.warning(f"Verificação falhou: {name} (esperado {expected}, obtido {observed})")
    return CheckResult(name, str(expected), str(observed), ok)


def _block_tree(x: int, y: int, position: BlockPosition) -> Tuple[RootedTree, int, int]:
    """Árvore com o bloco de graus (x, y) na posição pedida; devolve (árvore, k, i)"""
    k, i = {BlockPosition.SINGLE: (1, 1), BlockPosition.FIRST: (2, 1),
            BlockPosition.LAST: (2, 2), BlockPosition.INTERIOR: (3, 2)}[position]
    levels = {2 * i - 2: x, 2 * i - 1: y}
    tree = graph_service.generate_spherically_symmetric_tree(lambda r: levels.get(r, 3), 2 * k)
    return tree, k, i


class VerificationService:
    """Suíte de verificações exatas executada pelo comando verify"""

    def __init__(self, oracle: PermutationOracle = permutation_oracle):
        self.oracle = oracle

    def tree_marginals(self) -> List[CheckResult]:
        """marginal_Ai contra o oráculo em todas as posições e graus 2..5"""
        results = []
        for position in BlockPosition:
            for x in DEGREES:
                for y in DEGREES:
                    tree, k, i = _block_tree(x, y, position)
                    gamma = tree_paths_service.enumerate_root_paths(tree, 2 * k - 1)[0]
                    relevant, predicate = tree_paths_service.block_event(gamma, i)
                    if len(set(relevant)) > self.oracle.max_vertices:
                        continue
                    results.append(_check(f"marginal_Ai[{position.value},{x},{y}]",
                                          tree_paths_service.marginal_Ai(x, y, position),
                                          self.oracle.probability(relevant, predicate)))
        return results

    def _b_pair_oracle(self, chosen) -> Fraction:
        def at_most_one_younger(u, out):
            return lambda rank: sum(1 for w in out if rank[w] < rank[u]) <= 1

        relevant = [v for u, out, _ in chosen for v in (u,) + out]
        if len(relevant) <= self.oracle.max_vertices:
            tests = [at_most_one_younger(u, out) for u, out, _ in chosen]
            return self.oracle.probability(relevant, lambda rank: all(t(rank) for t in tests))
        # conjuntos externos disjuntos: fatores independentes
        p = Fraction(1)
        for u, out, _ in chosen:
            p *= self.oracle.probability((u,) + out, at_most_one_younger(u, out))
        return p

    def b_pairs(self, depth: int = 6) -> List[CheckResult]:
        """prob_B_pair contra o oráculo para j = 1..5 em perfis de graus 3, 4, 5"""
        results = []
        for profile in B_PAIR_PROFILES:
            values = [int(d) for d in profile.split(",")]
            tree = graph_service.generate_spherically_symmetric_tree(
                lambda r: values[r % len(values)], depth)
            paths = tree_paths_service.enumerate_root_paths(tree, depth - 1)
            gamma = paths[0]
            for j in range(1, depth):
                other = next(p for p in paths if gamma.meet_index(p) == j)
                chosen = tree_paths_service.b_pair_vertices(tree, gamma, other)
                results.append(_check(f"prob_B_pair[{profile},j={j}]",
                                      tree_paths_service.prob_B_pair(tree, gamma, other),
                                      self._b_pair_oracle(chosen)))
        return results

    def b_exact_hosts(self) -> List[tuple]:
        tree = graph_service.generate_spherically_symmetric_tree(lambda r: 3, 3)
        return [("path7", graph_service.path_graph(7), 0), ("cycle6", graph_service.cycle_graph(6), 0),
                ("star4", graph_service.star_graph(4), 1), ("tree3", tree.graph, 0)]

    def b_exact(self, n_max: int = 3) -> List[CheckResult]:
        """prob_B_exact contra o oráculo em hospedeiros com até 8 vértices relevantes"""
        results = []
        for name, g, v in self.b_exact_hosts():
            for n in range(1, n_max + 1):
                for gamma in t2_forest_service.enumerate_gamma_prime(g, v, n):
                    relevant = sorted(set().union(*t2_forest_service.tail_sets(g, gamma)))
                    if len(relevant) > B_EXACT_MAX_VERTICES:
                        continue
                    observed = self.oracle.probability(
                        relevant, lambda rank: t2_forest_service.b_gamma_occurs(g, gamma, rank))
                    results.append(_check(f"prob_B_exact[{name},{gamma.vertices}]",
                                          t2_forest_service.prob_B_exact(g, gamma), observed))
        return results

    def lattice(self, d_max: int = 100) -> List[CheckResult]:
        """Marginal na rede: oráculo em d = 2 e d = 3, expressão de três termos e cota 9/(8d^2)"""
        relevant, predicate = lattice_service.block_event(PATH_2D, 1)
        results = [
            _check("lattice_marginal_Ai[d=2]", lattice_service.lattice_marginal_Ai(2),
                   self.oracle.probability(relevant, predicate)),
            _check("lattice_marginal_display[d=2]", Fraction(22, 45),
                   lattice_service.lattice_marginal_display(2)),
        ]
        relevant, predicate = lattice_service.block_event(PATH_3D, 1)
        if len(relevant) <= self.oracle.max_vertices:
            results.append(_check("lattice_marginal_Ai[d=3]", lattice_service.lattice_marginal_Ai(3),
                                  self.oracle.probability(relevant, predicate)))
        failing = [d for d in range(2, d_max + 1)
                   if not lattice_service.lattice_marginal_display(d) > Fraction(9, 8 * d ** 2)]
        results.append(_check(f"lattice_bound[2..{d_max}]", [], failing))
        return results

    def lattice_correlation(self) -> List[CheckResult]:
        """Pr[A(gamma)] >= produto das marginais dos blocos em Z^2 (blocos com vértices em comum)"""
        results = []
        for gamma in CORRELATION_PATHS:
            events = [lattice_service.block_event(gamma, i) for i in range(1, len(gamma) // 2 + 1)]
            union = list(dict.fromkeys(v for relevant, _ in events for v in relevant))
            if len(union) > self.oracle.max_vertices:
                logger.debug(f"Correlação pulada: {len(union)} pontos relevantes")
                continue
            joint = self.oracle.probability(union, lambda rank: all(p(rank) for _, p in events))
            product = Fraction(1)
            for relevant, predicate in events:
                product *= self.oracle.probability(relevant, predicate)
            results.append(CheckResult(f"lattice_correlation[k={len(gamma) // 2}]", f">= {product}",
                                       str(joint), joint >= product))
        return results

    def claim(self, bound: int = 50) -> List[CheckResult]:
        return [_check(f"minimize_claim_f[{bound}]", ((3, 3), Fraction(1, 3)),
                       tree_paths_service.minimize_claim_f(bound))]

    def smoothing(self, r_max: int = 20) -> List[CheckResult]:
        """Identidade 2(r' - r - 1) em toda a grade"""
        failing = []
        for r in range(r_max + 1):
            for r_prime in range(r + 2, r_max + 3):
                try:
                    random_graphs_service.degree_smoothing_step(r, r_prime)
                except InvariantViolation:
                    failing.append((r, r_prime))
        return [_check(f"degree_smoothing_step[0..{r_max}]", [], failing)]

    def chain(self, d: int = 20, truncation: int = 20) -> List[CheckResult]:
        params = lattice_service.chain_params(d)
        mass = sum(lattice_service.chain_law(params, k0, k2)
                   for k2 in range(1, truncation + 1) for k0 in range(1, k2 + 1))
        return [
            _check(f"chain_law_mass[d={d}]", True, 1 - mass < Fraction(1, 10 ** 9)),
            _check(f"chain_law_display[d={d},1,1]", params.q4inf,
                   lattice_service.chain_law_display(params, 1, 1)),
        ]

    def recurrence(self, n_max: int = 6) -> List[CheckResult]:
        tree = graph_service.generate_spherically_symmetric_tree(lambda r: 3, n_max + 1)
        check = t2_forest_service.weighted_sum_recurrence_check(tree.graph, 0, n_max)
        return [_check(f"S_n_non_increasing[3-regular,n<={n_max}]", None, check.first_violation)]

    def t2_structure(self, families: Sequence[Callable[[np.random.Generator], Graph]],
                     trials: int, rng: np.random.Generator) -> List[CheckResult]:
        """T_2 floresta monótona em todas as amostras"""
        violations = 0
        for _ in range(trials):
            for build in families:
                g = build(rng)
                if not t2_forest_service.analyze_T2(g, layers_service.sample_ages(g, rng)).ok:
                    violations += 1
        return [_check(f"T2_forest[{trials}x{len(families)}]", 0, violations)]

    def run_all(self, families: Sequence[Callable[[np.random.Generator], Graph]], trials: int,
                rng: np.random.Generator, include_large: bool = True) -> List[CheckResult]:
        """Todas as verificações; include_large=False pula casos com 10 vértices relevantes"""
        oracle = self.oracle
        if not include_large:
            self.oracle = PermutationOracle(max_vertices=9)
        try:
            results = []
            for step in (self.claim, self.smoothing, self.lattice, self.lattice_correlation, self.chain,
                         self.recurrence, self.b_exact, self.b_pairs):
                results.extend(step())
            results.extend(self.tree_marginals())
            results.extend(self.t2_structure(families, trials, rng))
        finally:
            self.oracle = oracle
        passed = sum(r.ok for r in results)
        logger.info(f"Verificação: {passed}/{len(results)} checagens aprovadas")
        return results


verification_service = VerificationService()
