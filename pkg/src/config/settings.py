"""
Configurações centralizadas do laboratório
"""
import os
from dataclasses import dataclass


@dataclass
class SimulationConfig:
    """Configurações de execução das simulações"""
    workers: int = 1
    chunk_size: int = 256
    master_seed: int = 0


@dataclass
class LimitsConfig:
    """Limites de enumeração e orçamentos de busca"""
    oracle_max_vertices: int = 10
    enumeration_cap: int = 100_000
    max_attempts: int = 1000
    node_budget: int = 1_000_000
    cycle_k_max: int = 8


@dataclass
class OutputConfig:
    """Configurações de saída dos relatórios"""
    format: str = "csv"
    directory: str = "results"


@dataclass
class LoggingConfig:
    """Configurações de log"""
    level: str = "INFO"


class Settings:
    """Classe principal de configurações"""

    def __init__(self):
        self.simulation = SimulationConfig()
        self.limits = LimitsConfig()
        self.output = OutputConfig()
        self.logging = LoggingConfig()

        self._load_from_env()

    def _load_from_env(self):
        """Carrega configurações de variáveis de ambiente"""
        self.simulation.workers = int(os.getenv('LAYERS_WORKERS', self.simulation.workers))
        self.simulation.chunk_size = int(os.getenv('LAYERS_CHUNK_SIZE', self.simulation.chunk_size))
        self.simulation.master_seed = int(os.getenv('LAYERS_SEED', self.simulation.master_seed))

        self.limits.node_budget = int(os.getenv('LAYERS_NODE_BUDGET', self.limits.node_budget))
        self.limits.enumeration_cap = int(os.getenv('LAYERS_ENUMERATION_CAP', self.limits.enumeration_cap))
        self.limits.max_attempts = int(os.getenv('LAYERS_MAX_ATTEMPTS', self.limits.max_attempts))

        self.output.format = os.getenv('LAYERS_OUTPUT_FORMAT', self.output.format).lower()
        self.output.directory = os.getenv('LAYERS_OUTPUT_DIR', self.output.directory)

        self.logging.level = os.getenv('LAYERS_LOG_LEVEL', self.logging.level).upper()

    def get_summary(self) -> dict:
        """Retorna resumo das configurações ativas"""
        return {
            "workers": self.simulation.workers,
            "chunk_size": self.simulation.chunk_size,
            "master_seed": self.simulation.master_seed,
            "node_budget": self.limits.node_budget,
            "enumeration_cap": self.limits.enumeration_cap,
            "max_attempts": self.limits.max_attempts,
            "output_format": self.output.format,
            "log_level": self.logging.level,
        }


settings = Settings()
