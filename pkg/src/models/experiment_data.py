"""
Modelos de experimentos: configuração, estimativas e relatórios
"""
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np


@dataclass(frozen=True)
class Estimate:
    """Média amostral, erro padrão (desvio / raiz de n) e número de ensaios"""
    mean: float
    stderr: float
    trials: int

    @classmethod
    def from_samples(cls, samples) -> "Estimate":
        arr = np.asarray(samples, dtype=float)
        n = len(arr)
        if n == 0:
            return cls(math.nan, math.nan, 0)
        std = float(arr.std(ddof=1)) if n > 1 else 0.0
        return cls(float(arr.mean()), std / math.sqrt(n), n)

    @classmethod
    def from_count(cls, hits: int, trials: int) -> "Estimate":
        """Frequência de Bernoulli"""
        if trials == 0:
            return cls(math.nan, math.nan, 0)
        p = hits / trials
        var = p * (1 - p) * trials / (trials - 1) if trials > 1 else 0.0
        return cls(p, math.sqrt(var / trials), trials)

    def within(self, expected: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - expected) <= sigmas * self.stderr + 1e-12


@dataclass
class ExperimentConfig:
    """Configuração de um experimento reprodutível"""
    experiment: str
    generator: str = ""
    k: int = 2
    trials: int = 1
    sizes: List[int] = field(default_factory=list)
    seed: int = 0
    output: Optional[str] = None
    format: str = "csv"
    workers: Optional[int] = None
    params: Dict[str, Any] = field(default_factory=dict)

    def param(self, name: str, default: Any = None) -> Any:
        return self.params.get(name, default)

    def to_dict(self) -> dict:
        """Eco da configuração (sem destino de saída nem paralelismo)"""
        echo = asdict(self)
        for key in ("output", "format", "workers"):
            echo.pop(key)
        echo["params"] = dict(sorted(self.params.items()))
        return echo


@dataclass
class ExperimentReport:
    """Relatório tabular com eco da configuração"""
    experiment: str
    config: Dict[str, Any]
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    wall_clock: float = 0.0
    passed: bool = True

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "columns": self.columns,
            "rows": self.rows,
            "summary": self.summary,
            "wall_clock": self.wall_clock,
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(
            experiment=data["experiment"],
            config=data["config"],
            columns=list(data["columns"]),
            rows=[list(row) for row in data["rows"]],
            summary=dict(data.get("summary", {})),
            wall_clock=float(data.get("wall_clock", 0.0)),
            passed=bool(data.get("passed", True)),
        )
