import itertools
import os
import sys
from pathlib import Path

import numpy as np
import pytest
import scipy.optimize

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from bidi_tools.config import reset_settings
from bidi_tools.data.datasets import load_dataset, load_embedded_text
from bidi_tools.graph.core import (
    BidirectedGraph,
    enumerate_connected_sets,
    maximal_connected_partition,
)
from bidi_tools.graph.groups import VertexPermutationGroup
from bidi_tools.likelihood.kernel import CountTable
from bidi_tools.mobius.transforms import CellDistribution

TWIN_LABELS = ("A1", "A2", "D1", "D2")


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run tests marked slow (stepwise search on the trust data)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="slow; pass --run-slow to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test reads BIDI_* settings from a clean environment."""
    for key in list(os.environ):
        if key.startswith("BIDI_"):
            monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(scope="session")
def twin_counts():
    return load_dataset("builtin:twin").to_counts()


@pytest.fixture(scope="session")
def trust_counts():
    return load_dataset("builtin:trust").to_counts()


@pytest.fixture(scope="session")
def twin_graph():
    return BidirectedGraph.parse(load_embedded_text("graph", "twin4cycle"), TWIN_LABELS)


@pytest.fixture(scope="session")
def twin_group():
    return VertexPermutationGroup.parse(load_embedded_text("group", "twin"), TWIN_LABELS)


@pytest.fixture(scope="session")
def trust_graph(trust_counts):
    return BidirectedGraph.parse(load_embedded_text("graph", "trust"), trust_counts.labels)


@pytest.fixture
def four_cycle():
    """Edges 1-3, 3-4, 4-2, 2-1 on vertices 1..4."""
    return BidirectedGraph(("1", "2", "3", "4"), [(0, 2), (2, 3), (3, 1), (1, 0)])


@pytest.fixture
def four_chain():
    """Edges 1-3, 3-4, 4-2."""
    return BidirectedGraph(("1", "2", "3", "4"), [(0, 2), (2, 3), (3, 1)])


@pytest.fixture
def three_chain():
    return BidirectedGraph(("a", "b", "c"), [(0, 1), (1, 2)])


@pytest.fixture
def isolated_vertex_graph():
    """Vertex 1 isolated, single edge 2-3."""
    return BidirectedGraph(("1", "2", "3"), [(1, 2)])


@pytest.fixture
def two_component_example():
    """X1 independent of X2 and of X3 separately, but not of (X2, X3)."""
    probs = {
        (0, 0, 0): 0.02,
        (0, 1, 0): 0.03,
        (1, 0, 0): 0.05,
        (1, 1, 0): 0.10,
        (0, 0, 1): 0.08,
        (0, 1, 1): 0.12,
        (1, 0, 1): 0.25,
        (1, 1, 1): 0.35,
    }
    return CellDistribution.from_patterns(("1", "2", "3"), probs)


def _latent_member(g: BidirectedGraph, rng: np.random.Generator) -> CellDistribution:
    """Distribution in the model of ``g`` built from one latent bit per edge.

    ``X_v = 1`` when any latent bit on an edge at ``v`` is 1 or an independent
    noise bit at ``v`` is 1. Non-adjacent vertex sets share no latent bits.
    """
    n = g.nvars
    edges = g.edges
    edge_prob = rng.uniform(0.1, 0.6, size=len(edges))
    noise_zero = rng.uniform(0.3, 0.8, size=n)
    p = np.zeros(1 << n)
    for u in itertools.product((0, 1), repeat=len(edges)):
        weight = np.prod([edge_prob[k] if b else 1.0 - edge_prob[k] for k, b in enumerate(u)])
        forced = [False] * n
        for k, b in enumerate(u):
            if b:
                v, w = edges[k]
                forced[v] = forced[w] = True
        zero_prob = [0.0 if forced[v] else noise_zero[v] for v in range(n)]
        tensor = np.ones(())
        for v in range(n):
            tensor = np.multiply.outer(tensor, [zero_prob[v], 1.0 - zero_prob[v]])
        p += weight * tensor.T.reshape(-1)
    return CellDistribution(g.labels, p / p.sum())


@pytest.fixture
def random_member():
    """Factory: ``random_member(g, seed)`` returns a strictly positive member of the model."""

    def make(g: BidirectedGraph, seed: int = 0) -> CellDistribution:
        return _latent_member(g, np.random.default_rng(seed))

    return make


@pytest.fixture
def random_counts():
    """Factory: positive integer counts over ``2^n`` cells."""

    def make(labels, seed: int = 0, low: int = 5, high: int = 60) -> CountTable:
        rng = np.random.default_rng(seed)
        return CountTable(tuple(labels), rng.integers(low, high, size=1 << len(labels)))

    return make


@pytest.fixture
def independent_counts():
    """Counts that factor exactly into binary margins (dyadic probabilities)."""
    labels = ("a", "b", "c")
    margins = [(0.5, 0.5), (0.25, 0.75), (0.75, 0.25)]
    tensor = np.ones(())
    for m in margins:
        tensor = np.multiply.outer(tensor, m)
    return CountTable(labels, 1024.0 * tensor.T.reshape(-1))


def _slsqp_loglik(g: BidirectedGraph, counts: CountTable) -> float:
    """Maximize ``sum n log p`` over the simplex under the product constraints of ``g``."""
    size = 1 << g.nvars
    cells = np.arange(size)
    catalog = set(enumerate_connected_sets(g))
    disconnected = [d for d in range(1, size) if d not in catalog]
    blocks = {d: maximal_connected_partition(g, d).blocks for d in disconnected}
    weights = counts.n.astype(float) / counts.n_total

    def zero_mass(p, mask):
        return p[(cells & mask) == 0].sum()

    def constraint(p):
        return np.array(
            [zero_mass(p, d) - np.prod([zero_mass(p, c) for c in blocks[d]]) for d in disconnected]
        )

    constraints = [{"type": "eq", "fun": lambda p: p.sum() - 1.0}]
    if disconnected:
        constraints.append({"type": "eq", "fun": constraint})
    result = scipy.optimize.minimize(
        lambda p: -float(np.dot(weights, np.log(p))),
        np.full(size, 1.0 / size),
        jac=lambda p: -weights / p,
        method="SLSQP",
        bounds=[(1e-9, 1.0)] * size,
        constraints=constraints,
        options={"ftol": 1e-15, "maxiter": 3000},
    )
    return float(np.dot(counts.n, np.log(result.x)))


@pytest.fixture
def constrained_oracle():
    """Factory: ``constrained_oracle(g, counts)`` is the SLSQP maximum of the log-likelihood."""
    return _slsqp_loglik
