"""
Erros do laboratório de camadas
"""


class LayersLabError(Exception):
    """Erro base do laboratório"""


class DuplicateEdge(LayersLabError):
    """Aresta repetida em grafo simples"""


class SelfLoop(LayersLabError):
    """Laço em grafo simples"""


class EndpointOutOfRange(LayersLabError):
    """Extremo de aresta fora de 0..n-1"""


class DepthZero(LayersLabError):
    """Profundidade de árvore inválida"""


class OddDegreeSum(LayersLabError):
    """Soma de graus ímpar"""


class AttemptsExhausted(LayersLabError):
    """Amostragem por rejeição sem sucesso"""


class TiesDetected(LayersLabError):
    """Idades repetidas (ordem não é total)"""


class DegreeTooSmall(LayersLabError):
    """Grau pequeno demais para a fórmula"""


class TooLarge(LayersLabError):
    """Conjunto grande demais para o oráculo de permutações"""


class BadConfig(LayersLabError):
    """Configuração de caminhos 'nice' inválida"""


class EnumerationTooLarge(LayersLabError):
    """Enumeração de caminhos acima do limite"""


class DivergentSeries(LayersLabError):
    """Parâmetros fora da região de convergência"""


class BudgetExhausted(LayersLabError):
    """Orçamento de nós da busca esgotado"""


class KTooLarge(LayersLabError):
    """Comprimento máximo de ciclo acima do suportado"""


class BadOrder(LayersLabError):
    """Par de graus fora da ordem exigida"""


class UnknownExperiment(LayersLabError):
    """Experimento não registrado"""


class InvalidConfig(LayersLabError):
    """Configuração de experimento inválida"""


class IoFailure(LayersLabError):
    """Falha de leitura ou escrita"""


class InvariantViolation(LayersLabError):
    """Invariante violado durante verificação"""
