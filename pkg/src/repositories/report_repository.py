"""
Repositório de relatórios
Arquivos de configuração chave = valor e relatórios CSV/JSON
"""
import csv
import io
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ..config.settings import settings
from ..models.errors import InvalidConfig, IoFailure
from ..models.experiment_data import ExperimentConfig, ExperimentReport

logger = logging.getLogger(__name__)

FIELDS = ("experiment", "generator", "k", "trials", "sizes", "seed", "output", "format", "workers")
FORMATS = ("csv", "json")


def parse_value(text: str) -> Any:
    """Inteiro, real, booleano ou texto; '1e3' vira 1000"""
    text = text.strip()
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        return text
    return int(value) if value.is_integer() and "e" in lowered else value


def _cell(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "item"):
        return value.item()
    return value


class ReportRepository:
    """Persistência de configurações e relatórios de experimentos"""

    def parse_config(self, text: str, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        """Uma chave = valor por linha, '#' comenta; chaves desconhecidas vão para params"""
        values: Dict[str, Any] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise InvalidConfig(f"Linha {number} sem 'chave = valor': {raw!r}")
            values[key.strip().replace("-", "_")] = value.strip()
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key.replace("-", "_")] = value
        return self.build_config(values)

    def load_config(self, path: Union[str, Path],
                    overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise IoFailure(f"Erro ao ler configuração {path}: {e}") from e
        logger.info(f"Configuração carregada de {path}")
        return self.parse_config(text, overrides)

    def build_config(self, values: Dict[str, Any]) -> ExperimentConfig:
        """ExperimentConfig a partir de valores textuais ou já tipados"""
        if "experiment" not in values:
            raise InvalidConfig("Configuração sem a chave 'experiment'")

        def typed(value):
            return parse_value(value) if isinstance(value, str) else value

        sizes = values.get("sizes", [])
        if isinstance(sizes, str):
            sizes = [typed(s) for s in sizes.split(",") if s.strip()]
        try:
            config = ExperimentConfig(
                experiment=str(values["experiment"]),
                generator=str(values.get("generator", "")),
                k=int(typed(values.get("k", 2))),
                trials=int(typed(values.get("trials", 1))),
                sizes=[int(s) for s in sizes],
                seed=int(typed(values.get("seed", 0))),
                output=values.get("output") or None,
                format=str(values.get("format", "csv")).lower(),
                workers=int(typed(values["workers"])) if values.get("workers") is not None else None,
                params={key: typed(value) for key, value in values.items() if key not in FIELDS},
            )
        except (TypeError, ValueError) as e:
            raise InvalidConfig(f"Valor inválido na configuração: {e}") from e
        if config.format not in FORMATS:
            raise InvalidConfig(f"Formato desconhecido: {config.format}")
        return config

    def render(self, report: ExperimentReport, fmt: str = "csv") -> str:
        """Texto do relatório; ordem de campos estável"""
        if fmt == "json":
            return json.dumps(report.to_dict(), indent=2, default=_cell) + "\n"
        if fmt != "csv":
            raise InvalidConfig(f"Formato desconhecido: {fmt}")
        buffer = io.StringIO()
        buffer.write(f"# experiment={report.experiment}\n")
        for key, value in report.config.items():
            if key != "experiment":
                buffer.write(f"# {key}={self._echo(value)}\n")
        for key, value in report.summary.items():
            buffer.write(f"# summary.{key}={self._echo(value)}\n")
        buffer.write(f"# passed={report.passed}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([_cell(value) for value in row])
        return buffer.getvalue()

    def _echo(self, value: Any) -> str:
        if isinstance(value, dict):
            return ";".join(f"{k}:{self._echo(v)}" for k, v in value.items())
        if isinstance(value, (list, tuple)):
            return ",".join(self._echo(v) for v in value)
        return str(_cell(value))

    def emit(self, report: ExperimentReport, fmt: str = "csv",
             path: Optional[Union[str, Path]] = None) -> Path:
        """Grava o relatório; sem caminho, usa o diretório de saída configurado"""
        if path is None:
            path = Path(settings.output.directory) / f"{report.experiment}.{fmt}"
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.render(report, fmt), encoding="utf-8")
        except OSError as e:
            raise IoFailure(f"Erro ao gravar relatório {path}: {e}") from e
        logger.info(f"Relatório {report.experiment} gravado em {path}")
        return path

    def load_report(self, path: Union[str, Path]) -> ExperimentReport:
        """Lê um relatório JSON"""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            raise IoFailure(f"Erro ao ler relatório {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise IoFailure(f"JSON inválido em {path}: {e}") from e
        return ExperimentReport.from_dict(data)
