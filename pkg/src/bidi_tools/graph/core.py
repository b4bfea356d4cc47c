"""
Bi-directed graph representation and subset combinatorics.

Vertex subsets are plain ``int`` bitmasks: bit ``v`` is set when vertex
``v`` (its position in the label order) is a member.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from ..config import get_settings
from ..errors import (
    EmptyVertexSet,
    InvalidGraph,
    LabelMismatch,
    VertexLimitExceeded,
    VertexOutOfRange,
)

logger = logging.getLogger(__name__)

_EDGE_RE = re.compile(r"^\s*(\S+)\s*<->\s*(\S+)\s*$")


def bit(v: int) -> int:
    return 1 << v


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def members(mask: int) -> List[int]:
    """Indices of the vertices in ``mask``, ascending."""
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for v in indices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Vertex:
    """A vertex with its dense index and label."""

    index: int
    label: str


VertexLike = Union[int, Vertex]


class BidirectedGraph:
    """Undirected edge set over labelled vertices, read as a bi-directed graph.

    Instances are immutable and hashable so derived catalogs can be cached.
    """

    def __init__(self, labels: Sequence[str], edges: Iterable[Tuple[int, int]] = ()):
        labels = tuple(str(label) for label in labels)
        if not labels:
            raise EmptyVertexSet("graph")
        if len(set(labels)) != len(labels):
            raise InvalidGraph(f"Duplicate vertex labels in {labels}")

        n = len(labels)
        normalized = set()
        for v, w in edges:
            if not (0 <= v < n):
                raise VertexOutOfRange(v, n)
            if not (0 <= w < n):
                raise VertexOutOfRange(w, n)
            if v == w:
                raise InvalidGraph(f"Self-loop on vertex {labels[v]}")
            normalized.add((min(v, w), max(v, w)))

        self._labels: Tuple[str, ...] = labels
        self._edges: FrozenSet[Tuple[int, int]] = frozenset(normalized)
        adjacency = [0] * n
        for v, w in self._edges:
            adjacency[v] |= bit(w)
            adjacency[w] |= bit(v)
        self._adjacency: Tuple[int, ...] = tuple(adjacency)

    # -- constructors ---------------------------------------------------

    @classmethod
    def complete(cls, labels: Sequence[str]) -> "BidirectedGraph":
        n = len(labels)
        return cls(labels, [(v, w) for v in range(n) for w in range(v + 1, n)])

    @classmethod
    def empty(cls, labels: Sequence[str]) -> "BidirectedGraph":
        return cls(labels, [])

    @classmethod
    def parse(cls, text: str, labels: Sequence[str]) -> "BidirectedGraph":
        """Parse the edge-list format, one ``LABEL <-> LABEL`` per line.

        The vertex universe comes from ``labels`` (usually the dataset header);
        vertices without edges need not be mentioned. Blank lines and lines
        starting with ``#`` are ignored.
        """
        index = {label: i for i, label in enumerate(labels)}
        edges = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            match = _EDGE_RE.match(line)
            if match is None:
                raise InvalidGraph(f"Line {lineno}: expected 'A <-> B', got {raw!r}")
            a, b = match.group(1), match.group(2)
            for name in (a, b):
                if name not in index:
                    raise LabelMismatch(f"Line {lineno}: unknown vertex label {name!r}")
            edges.append((index[a], index[b]))
        return cls(labels, edges)

    def to_edge_list(self) -> str:
        return "".join(f"{self._labels[v]} <-> {self._labels[w]}\n" for v, w in self.edges)

    # -- accessors ------------------------------------------------------

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    @property
    def nvars(self) -> int:
        return len(self._labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self._labels)) - 1

    @property
    def vertices(self) -> List[Vertex]:
        return [Vertex(i, label) for i, label in enumerate(self._labels)]

    @property
    def edges(self) -> List[Tuple[int, int]]:
        """Edges as sorted ``(v, w)`` pairs with ``v < w``."""
        return sorted(self._edges)

    @property
    def adjacency(self) -> Tuple[int, ...]:
        return self._adjacency

    def vertex(self, key: Union[int, str]) -> Vertex:
        if isinstance(key, str):
            try:
                return Vertex(self._labels.index(key), key)
            except ValueError:
                raise LabelMismatch(f"Unknown vertex label {key!r}") from None
        self.check_vertex(key)
        return Vertex(key, self._labels[key])

    def check_vertex(self, v: VertexLike) -> int:
        index = v.index if isinstance(v, Vertex) else int(v)
        if not (0 <= index < self.nvars):
            raise VertexOutOfRange(v, self.nvars)
        return index

    def check_mask(self, mask: int) -> int:
        if mask < 0 or mask >> self.nvars:
            raise VertexOutOfRange(f"{mask:#x}", self.nvars)
        return mask

    def has_edge(self, v: int, w: int) -> bool:
        return bool(self._adjacency[v] >> w & 1)

    def without_edge(self, v: int, w: int) -> "BidirectedGraph":
        key = (min(v, w), max(v, w))
        if key not in self._edges:
            raise InvalidGraph(f"No edge {self.edge_label(key)} to remove")
        return BidirectedGraph(self._labels, self._edges - {key})

    def edge_label(self, edge: Tuple[int, int]) -> str:
        v, w = edge
        return f"{self._labels[v]}<->{self._labels[w]}"

    def format_set(self, mask: int) -> str:
        return "{" + ",".join(self._labels[v] for v in members(mask)) + "}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BidirectedGraph):
            return NotImplemented
        return self._labels == other._labels and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._labels, self._edges))

    def __repr__(self) -> str:
        edges = ", ".join(self.edge_label(e) for e in self.edges)
        return f"BidirectedGraph(labels={list(self._labels)}, edges=[{edges}])"


# ---------------------------------------------------------------------------
# Connectivity
# ---------------------------------------------------------------------------


class UnionFind:
    """Disjoint-set forest over ``size`` elements with path compression."""

    def __init__(self, size: int):
        self.parents = list(range(size))
        self.num_components = size

    def find(self, elem: int) -> int:
        root = elem
        while root != self.parents[root]:
            root = self.parents[root]
        while elem != root:
            self.parents[elem], elem = root, self.parents[elem]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # smaller root wins so representatives are block minima
        if rb < ra:
            ra, rb = rb, ra
        self.parents[rb] = ra
        self.num_components -= 1


def spouse_set(g: BidirectedGraph, a: int) -> int:
    """spo(a): ``a`` together with every vertex adjacent to a member of ``a``."""
    g.check_mask(a)
    result = a
    adjacency = g.adjacency
    for v in members(a):
        result |= adjacency[v]
    return result


def component_of(g: BidirectedGraph, a: int, v: int) -> int:
    """Vertex set of the connected component of ``v`` within ``g[a]``."""
    adjacency = g.adjacency
    comp = bit(v)
    frontier = comp
    while frontier:
        grow = 0
        for w in members(frontier):
            grow |= adjacency[w]
        grow &= a & ~comp
        comp |= grow
        frontier = grow
    return comp


def is_connected(g: BidirectedGraph, a: int) -> bool:
    """True iff the induced subgraph on ``a`` is connected; the empty set is not."""
    g.check_mask(a)
    if a == 0:
        return False
    low = (a & -a).bit_length() - 1
    return component_of(g, a, low) == a


@dataclass(frozen=True)
class DisconnectedPartition:
    """Inclusion-maximal connected blocks of a vertex set, ordered by minimum member."""

    set: int
    blocks: Tuple[int, ...]

    @property
    def is_connected(self) -> bool:
        return len(self.blocks) == 1

    def block_containing(self, v: int) -> int:
        for block in self.blocks:
            if block >> v & 1:
                return block
        raise VertexOutOfRange(v, popcount(self.set))


def maximal_connected_partition(g: BidirectedGraph, a: int) -> DisconnectedPartition:
    """Split ``a`` into the connected components of its induced subgraph."""
    g.check_mask(a)
    if a == 0:
        raise EmptyVertexSet("maximal_connected_partition")
    uf = UnionFind(g.nvars)
    for v, w in g.edges:
        if a >> v & 1 and a >> w & 1:
            uf.union(v, w)
    blocks: Dict[int, int] = {}
    for v in members(a):
        root = uf.find(v)
        blocks[root] = blocks.get(root, 0) | bit(v)
    ordered = tuple(blocks[root] for root in sorted(blocks))
    return DisconnectedPartition(set=a, blocks=ordered)


# ---------------------------------------------------------------------------
# Connected-set catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConnectedSetCatalog:
    """All nonempty connected sets of a graph in (cardinality, value) order.

    ``block_index`` has one row per subset D of V listing the catalog positions
    of the maximal connected blocks of D, padded with ``len(catalog)``; it lets
    the product over blocks be taken as one vectorized gather.
    """

    graph: BidirectedGraph
    connected: Tuple[int, ...]
    index: Dict[int, int] = field(repr=False)
    masks: np.ndarray = field(repr=False)
    spouses: np.ndarray = field(repr=False)
    block_index: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.connected)

    def __iter__(self) -> Iterator[int]:
        return iter(self.connected)

    def __contains__(self, mask: object) -> bool:
        return mask in self.index

    def position(self, mask: int) -> int:
        return self.index[mask]

    def labels(self) -> List[str]:
        return [self.graph.format_set(c) for c in self.connected]

    @property
    def singleton_positions(self) -> np.ndarray:
        return np.array([self.index[bit(v)] for v in range(self.graph.nvars)], dtype=np.intp)


def _check_vertex_limit(nvars: int) -> None:
    limit = get_settings().vertex_limit
    if nvars > limit:
        raise VertexLimitExceeded(nvars, limit)


def enumerate_connected_sets(g: BidirectedGraph) -> ConnectedSetCatalog:
    """Build the catalog of nonempty connected sets of ``g``."""
    _check_vertex_limit(g.nvars)
    return _build_catalog(g)


@lru_cache(maxsize=256)
def _build_catalog(g: BidirectedGraph) -> ConnectedSetCatalog:
    n = g.nvars
    size = 1 << n

    # per-subset block decomposition, lowest block first
    blocks_of: List[Tuple[int, ...]] = [()] * size
    is_conn = [False] * size
    for d in range(1, size):
        low = (d & -d).bit_length() - 1
        comp = component_of(g, d, low)
        if comp == d:
            is_conn[d] = True
            blocks_of[d] = (d,)
        else:
            blocks_of[d] = (comp,) + blocks_of[d & ~comp]

    connected = tuple(
        sorted((d for d in range(1, size) if is_conn[d]), key=lambda d: (popcount(d), d))
    )
    index = {c: i for i, c in enumerate(connected)}
    pad = len(connected)
    width = max(len(b) for b in blocks_of[1:]) if size > 1 else 1
    block_index = np.full((size, width), pad, dtype=np.intp)
    for d in range(1, size):
        row = sorted(index[b] for b in blocks_of[d])
        block_index[d, : len(row)] = row

    masks = np.array(connected, dtype=np.int64)
    spouses = np.array([spouse_set(g, c) for c in connected], dtype=np.int64)
    for arr in (masks, spouses, block_index):
        arr.setflags(write=False)

    logger.debug(f"Catalog for {n} vertices: {len(connected)} connected sets")
    return ConnectedSetCatalog(
        graph=g,
        connected=connected,
        index=index,
        masks=masks,
        spouses=spouses,
        block_index=block_index,
    )


@lru_cache(maxsize=1024)
def _disconnected_containing(g: BidirectedGraph, v: int) -> Tuple[Tuple[int, int], ...]:
    n = g.nvars
    vbit = bit(v)
    pairs = []
    # supersets of {v} in increasing numeric order
    for d in range(1 << n):
        if not d & vbit:
            continue
        c = component_of(g, d, v)
        if c != d:
            pairs.append((d, c))
    return tuple(pairs)


def enumerate_disconnected_containing(g: BidirectedGraph, v: VertexLike) -> List[Tuple[int, int]]:
    """Pairs ``(D, C_v(D))`` for every disconnected D containing ``v``.

    ``C_v(D)`` is the maximal connected block of D holding ``v``. Results are
    cached per graph and vertex since every ICF cycle reuses them.
    """
    index = g.check_vertex(v)
    _check_vertex_limit(g.nvars)
    return list(_disconnected_containing(g, index))


def count_complete_sets(g: BidirectedGraph) -> int:
    """Number of nonempty cliques, singletons included."""
    adjacency = g.adjacency

    def extend(candidates: int) -> int:
        total = 0
        for v in members(candidates):
            later = candidates & adjacency[v] & ~((bit(v) << 1) - 1)
            total += 1 + extend(later)
        return total

    return extend(g.full_mask)


def local_independences(g: BidirectedGraph) -> Dict[int, int]:
    """Map each vertex v to V minus spo(v); X_v is independent of that set."""
    return {v: g.full_mask & ~spouse_set(g, bit(v)) for v in range(g.nvars)}


def pairwise_independences(g: BidirectedGraph) -> List[Tuple[int, int]]:
    """Non-adjacent vertex pairs ``(v, w)`` with ``v < w``."""
    return [
        (v, w) for v in range(g.nvars) for w in range(v + 1, g.nvars) if not g.has_edge(v, w)
    ]
