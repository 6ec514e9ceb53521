"""
TrialPool - Execução paralela de ensaios com fluxos aleatórios por índice
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import settings

logger = logging.getLogger(__name__)

TrialFunction = Callable[[Any, np.random.Generator], Any]
Repeater = Callable[..., List[Any]]


def trial_stream(master_seed: int, key: Tuple[int, ...]) -> np.random.Generator:
    """Fluxo determinístico para (semente mestra, chave do ensaio)"""
    return np.random.default_rng(np.random.SeedSequence(entropy=master_seed, spawn_key=key))


def sequential(rng: np.random.Generator) -> Repeater:
    """Repetidor em série sobre um único fluxo; a chave é ignorada"""
    def repeat(fn: TrialFunction, params: Any, trials: int, key: Tuple[int, ...] = ()) -> List[Any]:
        return [fn(params, rng) for _ in range(trials)]
    return repeat


def _run_trial(task):
    fn, params, master_seed, key = task
    return fn(params, trial_stream(master_seed, key))


class TrialPool:
    """Distribui ensaios entre processos; resultados na ordem dos índices"""

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers or settings.simulation.workers

    def map(self, fn: TrialFunction, param_list: Sequence[Any], master_seed: int,
            key: Tuple[int, ...] = ()) -> List[Any]:
        """Executa fn(params, rng) para cada elemento, rng derivado de key + (índice,)"""
        tasks = [(fn, params, master_seed, key + (i,)) for i, params in enumerate(param_list)]
        if self.workers <= 1 or len(tasks) <= 1:
            return [_run_trial(task) for task in tasks]
        chunk = max(1, min(settings.simulation.chunk_size, len(tasks) // self.workers))
        logger.debug(f"{len(tasks)} ensaios em {self.workers} processos (lotes de {chunk})")
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(_run_trial, tasks, chunksize=chunk))

    def repeat(self, fn: TrialFunction, params: Any, trials: int, master_seed: int,
               key: Tuple[int, ...] = ()) -> List[Any]:
        """Mesmo parâmetro em todos os ensaios"""
        return self.map(fn, [params] * trials, master_seed, key)

    def repeater(self, master_seed: int) -> Repeater:
        """Mesma assinatura de sequential(), com fluxos por chave e índice"""
        def repeat(fn: TrialFunction, params: Any, trials: int, key: Tuple[int, ...] = ()) -> List[Any]:
            return self.repeat(fn, params, trials, master_seed, key)
        return repeat
