import numpy as np
import pytest

from tglg.graph import Network


def random_network(p: int, edge_prob: float, rng: np.random.Generator) -> Network:
    """Erdos-Renyi-style test graph (possibly disconnected, isolated nodes)."""
    pairs = [(i, j) for i in range(p) for j in range(i + 1, p)
             if rng.random() < edge_prob]
    return Network(p, np.asarray(pairs, dtype=np.int64).reshape(-1, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
