"""
Controller de experimentos
Apenas gatilhos - sem regras de negócio
"""
import json
import logging
from typing import Any, Dict, Optional, Sequence

import click

from ..config.settings import settings
from ..models.errors import LayersLabError
from ..repositories.graph_repository import GraphRepository
from ..repositories.report_repository import ReportRepository
from ..services.experiment_service import ExperimentService

logger = logging.getLogger(__name__)

EXIT_FAILED_CHECK = 1
EXIT_ERROR = 2


class ExperimentController:
    """Controller dos subcomandos de experimento"""

    def __init__(self, reports: Optional[ReportRepository] = None,
                 service: Optional[ExperimentService] = None):
        self.reports = reports or ReportRepository()
        self.service = service or ExperimentService(GraphRepository(), self.reports)

    def overrides(self, options: Dict[str, Any], params: Sequence[str]) -> Dict[str, Any]:
        """Opções da linha de comando mais pares --param chave=valor"""
        values = {key: value for key, value in options.items() if value is not None}
        for item in params:
            key, sep, value = item.partition("=")
            if not sep:
                raise click.BadParameter(f"Esperado chave=valor: {item!r}", param_hint="--param")
            values[key.strip()] = value.strip()
        return values

    def execute(self, values: Dict[str, Any], config_file: Optional[str] = None) -> int:
        """Monta a configuração, executa e emite; devolve o código de saída"""
        try:
            if config_file:
                config = self.reports.load_config(config_file, values)
            else:
                config = self.reports.build_config(values)
            report = self.service.run(config)
            if config.output:
                self.reports.emit(report, config.format, config.output)
            else:
                click.echo(self.reports.render(report, config.format), nl=False)
        except (LayersLabError, ValueError) as e:
            logger.error(f"{type(e).__name__}: {e}")
            return EXIT_ERROR
        if not report.passed:
            logger.error(f"{config.experiment}: verificações falharam")
            return EXIT_FAILED_CHECK
        return 0

    def list_experiments(self) -> int:
        for name in self.service.experiments:
            click.echo(name)
        return 0

    def show_settings(self) -> int:
        click.echo(json.dumps(settings.get_summary(), indent=2))
        return 0
