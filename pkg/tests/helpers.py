from src.models.experiment_data import Estimate


def assert_within(estimate: Estimate, expected: float, sigmas: float = 4.0):
    """|média - esperado| <= sigmas * erro padrão"""
    assert estimate.within(expected, sigmas), (
        f"{estimate.mean:.6f} +- {estimate.stderr:.6f} longe de {expected:.6f}")
