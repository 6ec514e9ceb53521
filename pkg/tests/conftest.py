import numpy as np
import pytest

from src.services.graph_service import graph_service


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cubic_tree():
    """Árvore 3-regular de profundidade 6"""
    return graph_service.generate_spherically_symmetric_tree(lambda r: 3, 6)
