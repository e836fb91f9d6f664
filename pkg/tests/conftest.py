import numpy as np
import pytest

from gbig.gcn import GcnClassifier
from gbig.synthgen import GenParams, generate


@pytest.fixture(scope="session")
def small_bundle():
    """120-node house bundle shared by tests that just need real data."""
    return generate(GenParams(motif="house", homophily=1, num_subgraphs=10,
                              subgraph_size=12, edge_prob=0.2, seed=0))


@pytest.fixture(scope="session")
def trained_model(small_bundle):
    b = small_bundle
    return GcnClassifier(seed=0).fit(b.graph, b.features, b.labels,
                                     b.masks["train"])


@pytest.fixture
def rng():
    return np.random.default_rng(0)
