"""Bi-directed graphs, connected-set enumeration and vertex permutation groups."""

from .core import (
    BidirectedGraph,
    ConnectedSetCatalog,
    DisconnectedPartition,
    Vertex,
    count_complete_sets,
    enumerate_connected_sets,
    enumerate_disconnected_containing,
    is_connected,
    local_independences,
    maximal_connected_partition,
    pairwise_independences,
    spouse_set,
)
from .groups import VertexPermutationGroup, is_invariant, orbit_of_set

__all__ = [
    "BidirectedGraph",
    "ConnectedSetCatalog",
    "DisconnectedPartition",
    "Vertex",
    "VertexPermutationGroup",
    "count_complete_sets",
    "enumerate_connected_sets",
    "enumerate_disconnected_containing",
    "is_connected",
    "is_invariant",
    "local_independences",
    "maximal_connected_partition",
    "orbit_of_set",
    "pairwise_independences",
    "spouse_set",
]
