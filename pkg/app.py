"""
Aplicação principal
Apenas configuração e inicialização da linha de comando
"""
import logging
import sys

import click

from src.config.settings import settings
from src.controllers.experiment_controller import ExperimentController
from src.repositories.graph_repository import GraphRepository
from src.repositories.report_repository import ReportRepository
from src.services.experiment_service import ExperimentService

logger = logging.getLogger(__name__)

SUBCOMMANDS = {
    "sample": "Amostra idades e camadas de um grafo",
    "layer-marginal": "Frequência de cada camada para um vértice fixo",
    "tree-good": "Z_k e eventos k-good em árvores esfericamente simétricas",
    "tree-moments": "Primeiro e segundo momentos de Z_k por k",
    "nice-w": "Caminhos bons que poupam o conjunto marcado I e o tamanho de W",
    "t2-scan": "Somas S_n e frequência de I_{v,n}",
    "t2-scaling": "Maior componente de T_2 por tamanho",
    "lattice-eit": "Encontros e interseções de passeios monótonos em Z^d",
    "lattice-chain": "Cadeia auxiliar {0, 2, 4, inf}",
    "lattice-cross": "Busca de caminhos monótonos abertos em T_k(Z^d)",
    "randgraph-t3": "Componente gigante de T_3 com sequência de graus",
    "cycle-census": "Ciclos curtos do modelo de configuração",
    "er-scan": "Maior componente de T_3 em G(n, c/n)",
    "verify": "Suíte de verificações exatas",
}


def common_options(command):
    """Opções compartilhadas por todos os experimentos"""
    options = [
        click.option("--generator", "-g", default=None, help="Especificação do grafo ou família"),
        click.option("--k", "-k", type=int, default=None, help="Parâmetro k do modelo"),
        click.option("--trials", "-t", type=int, default=None, help="Número de ensaios"),
        click.option("--sizes", "-n", default=None, help="Tamanhos separados por vírgula"),
        click.option("--seed", "-s", type=int, default=None, help="Semente mestra"),
        click.option("--workers", "-w", type=int, default=None, help="Processos paralelos"),
        click.option("--output", "-o", default=None, help="Arquivo de saída (padrão: stdout)"),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None),
        click.option("--param", "-p", "params", multiple=True, help="Parâmetro extra chave=valor"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


class LayersLabApp:
    """Classe principal da aplicação - apenas configuração e comandos"""

    def __init__(self):
        logging.basicConfig(level=settings.logging.level, stream=sys.stderr,
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")

        # Inicialização de serviços
        self.reports = ReportRepository()
        self.graphs = GraphRepository()
        self.experiment_service = ExperimentService(self.graphs, self.reports)

        # Controllers
        self.controller = ExperimentController(self.reports, self.experiment_service)

        self.cli = click.Group(name="layers-lab", help="Laboratório de percolação em camadas")
        self._setup_commands()

    def _values(self, fmt, params, **options):
        if options.get("seed") is None:
            options["seed"] = settings.simulation.master_seed
        options["format"] = fmt or settings.output.format
        return self.controller.overrides(options, params)

    def _experiment_command(self, name: str, help_text: str) -> click.Command:
        @click.command(name=name, help=help_text)
        @common_options
        def command(fmt, params, **options):
            values = self._values(fmt, params, experiment=name, **options)
            sys.exit(self.controller.execute(values))
        return command

    def _setup_commands(self):
        """Configura os subcomandos"""
        for name, help_text in SUBCOMMANDS.items():
            self.cli.add_command(self._experiment_command(name, help_text))

        @self.cli.command(name="run", help="Executa um arquivo de configuração chave = valor")
        @click.option("--config", "-c", "config_file", required=True, type=click.Path(exists=True))
        @click.option("--experiment", "-e", default=None)
        @common_options
        def run(config_file, fmt, params, **options):
            values = self.controller.overrides(dict(options, format=fmt), params)
            sys.exit(self.controller.execute(values, config_file))

        @self.cli.command(name="experiments", help="Lista os experimentos disponíveis")
        def experiments():
            sys.exit(self.controller.list_experiments())

        @self.cli.command(name="settings", help="Mostra as configurações ativas")
        def show_settings():
            sys.exit(self.controller.show_settings())

    def run(self, args=None):
        """Executa a linha de comando"""
        self.cli.main(args=args, prog_name="layers-lab")


def main():
    """Função principal"""
    app = LayersLabApp()
    app.run()


if __name__ == "__main__":
    main()
