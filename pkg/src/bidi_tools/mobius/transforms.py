"""
Coordinate changes between cell probabilities and Möbius parameters.

Cells are indexed by bitmask: bit ``v`` of the cell index is the value of
``X_v``. Möbius vectors are indexed by vertex-set bitmask, with
``q[A] = P(X_A = 0)`` and ``q[0] = 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..errors import (
    InvalidDistribution,
    LabelMismatch,
    OutsideSimplex,
    VertexOutOfRange,
    ZeroMarginal,
)
from ..graph.core import (
    BidirectedGraph,
    ConnectedSetCatalog,
    Vertex,
    VertexLike,
    bit,
    enumerate_connected_sets,
    popcount,
)

logger = logging.getLogger(__name__)

NEGATIVE_TOLERANCE = 1e-10
SUM_TOLERANCE = 1e-10


def cell_index(pattern: Sequence[int]) -> int:
    """Cell index of a 0/1 pattern listed in vertex order."""
    index = 0
    for v, value in enumerate(pattern):
        if value:
            index |= 1 << v
    return index


def cell_pattern(cell: int, nvars: int) -> Tuple[int, ...]:
    return tuple((cell >> v) & 1 for v in range(nvars))


def _subset_sum(values: np.ndarray, nvars: int, sign: float) -> np.ndarray:
    """In-place zeta (sign=+1) or Möbius (sign=-1) transform over the subset lattice."""
    for k in range(nvars):
        view = values.reshape(-1, 2, 1 << k)
        if sign > 0:
            view[:, 1, :] += view[:, 0, :]
        else:
            view[:, 1, :] -= view[:, 0, :]
    return values


@dataclass(frozen=True, eq=False)
class CellDistribution:
    """Probability vector over the 2^n binary cells."""

    labels: Tuple[str, ...]
    p: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        arr = np.asarray(self.p, dtype=float)
        n = len(self.labels)
        if arr.shape != (1 << n,):
            raise InvalidDistribution(f"Expected {1 << n} cell probabilities, got {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0:
            raise InvalidDistribution("Cell probabilities must be finite and nonnegative")
        total = arr.sum()
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDistribution(f"Cell probabilities sum to {total:.15g}, not 1")
        object.__setattr__(self, "p", arr)

    @classmethod
    def uniform(cls, labels: Sequence[str]) -> "CellDistribution":
        size = 1 << len(labels)
        return cls(tuple(labels), np.full(size, 1.0 / size))

    @classmethod
    def from_patterns(
        cls, labels: Sequence[str], probs: Dict[Tuple[int, ...], float]
    ) -> "CellDistribution":
        """Build from ``{pattern: probability}``; unlisted cells get 0."""
        arr = np.zeros(1 << len(labels))
        for pattern, value in probs.items():
            arr[cell_index(pattern)] = value
        return cls(tuple(labels), arr)

    @property
    def nvars(self) -> int:
        return len(self.labels)

    def tensor(self) -> np.ndarray:
        """View with one axis per vertex, axis ``v`` indexing ``X_v``."""
        return self.p.reshape((2,) * self.nvars).T

    def probability(self, pattern: Sequence[int]) -> float:
        return float(self.p[cell_index(pattern)])


@dataclass(frozen=True, eq=False)
class MobiusVector:
    """Möbius parameters for every vertex set; ``q[0]`` is the empty set."""

    labels: Tuple[str, ...]
    q: np.ndarray = field(repr=False)

    @property
    def nvars(self) -> int:
        return len(self.labels)

    def __getitem__(self, mask: int) -> float:
        return float(self.q[mask])


@dataclass(frozen=True, eq=False)
class ConnectedParams:
    """Möbius parameters restricted to the connected sets, in catalog order."""

    catalog: ConnectedSetCatalog
    q_c: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.q_c, dtype=float)
        if arr.shape != (len(self.catalog),):
            raise InvalidDistribution(
                f"Expected {len(self.catalog)} connected-set parameters, got {arr.shape}"
            )
        object.__setattr__(self, "q_c", arr)

    @classmethod
    def from_distribution(
        cls, p: CellDistribution, catalog: ConnectedSetCatalog
    ) -> "ConnectedParams":
        q = mobius_forward(p)
        return cls(catalog, q.q[catalog.masks])

    @property
    def graph(self) -> BidirectedGraph:
        return self.catalog.graph

    def with_values(self, q_c: np.ndarray) -> "ConnectedParams":
        return ConnectedParams(self.catalog, q_c)

    def as_dict(self) -> Dict[str, float]:
        names = self.catalog.labels()
        return {name: float(value) for name, value in zip(names, self.q_c)}


@dataclass(frozen=True, eq=False)
class DependenceRatios:
    """``tau[A] = q_A / prod_{i in A} q_i``; meaningful for ``|A| >= 2``."""

    labels: Tuple[str, ...]
    tau: np.ndarray = field(repr=False)

    def __getitem__(self, mask: int) -> float:
        return float(self.tau[mask])

    def items(self) -> List[Tuple[int, float]]:
        return [(a, float(self.tau[a])) for a in range(len(self.tau)) if popcount(a) >= 2]


@dataclass
class MembershipReport:
    """Residuals of the product constraints over disconnected sets."""

    max_residual: float
    member: bool
    violators: List[Tuple[int, float]]
    tol: float


def mobius_forward(p: CellDistribution) -> MobiusVector:
    """``q_A`` = total probability of the cells with ``X_A = 0``."""
    g = _subset_sum(p.p.copy(), p.nvars, +1.0)
    q = g[::-1].copy()
    q[0] = 1.0
    return MobiusVector(p.labels, q)


def mobius_inverse(q: MobiusVector) -> CellDistribution:
    """Recover cell probabilities by alternating sums over supersets.

    Entries below ``-1e-10`` raise :class:`OutsideSimplex`; smaller negative
    round-off is clamped to zero and the vector renormalized.
    """
    g = np.asarray(q.q, dtype=float)[::-1].copy()
    g[-1] = 1.0
    p = _subset_sum(g, q.nvars, -1.0)
    worst = int(np.argmin(p))
    if p[worst] < -NEGATIVE_TOLERANCE:
        raise OutsideSimplex(worst, float(p[worst]))
    np.clip(p, 0.0, None, out=p)
    total = p.sum()
    if total <= 0:
        raise OutsideSimplex(worst, float(p[worst]))
    return CellDistribution(q.labels, p / total)


def extend_connected(params: ConnectedParams) -> MobiusVector:
    """Fill in every ``q_D`` as the product over the maximal connected blocks of D."""
    padded = np.append(params.q_c, 1.0)
    q = np.prod(padded[params.catalog.block_index], axis=1)
    return MobiusVector(params.graph.labels, q)


def parametrize(params: ConnectedParams) -> CellDistribution:
    """Map connected-set parameters to the distribution they determine."""
    return mobius_inverse(extend_connected(params))


def check_membership(
    p: CellDistribution, g: BidirectedGraph, tol: float = 1e-10
) -> MembershipReport:
    """Compare every ``q_D`` with the product over its blocks."""
    if p.labels != g.labels:
        raise LabelMismatch(f"Distribution labels {p.labels} do not match graph {g.labels}")
    catalog = enumerate_connected_sets(g)
    q = mobius_forward(p)
    implied = extend_connected(ConnectedParams(catalog, q.q[catalog.masks]))
    residual = np.abs(q.q - implied.q)
    residual[0] = 0.0
    offenders = np.flatnonzero(residual > tol)
    violators = sorted(
        ((int(d), float(residual[d])) for d in offenders), key=lambda item: (-item[1], item[0])
    )
    worst = float(residual.max())
    return MembershipReport(max_residual=worst, member=worst <= tol, violators=violators, tol=tol)


def dependence_ratios(q: MobiusVector) -> DependenceRatios:
    n = q.nvars
    singles = np.array([q.q[bit(v)] for v in range(n)])
    zero = np.flatnonzero(singles <= 0)
    if zero.size:
        raise ZeroMarginal(int(zero[0]))
    independent = np.ones(1 << n)
    for k in range(n):
        view = independent.reshape(-1, 2, 1 << k)
        view[:, 1, :] = view[:, 0, :] * singles[k]
    return DependenceRatios(q.labels, q.q / independent)


def flip_labels(p: CellDistribution, v: VertexLike) -> CellDistribution:
    """Swap the 0/1 coding of one variable."""
    index = v.index if isinstance(v, Vertex) else int(v)
    if not (0 <= index < p.nvars):
        raise VertexOutOfRange(v, p.nvars)
    cells = np.arange(1 << p.nvars) ^ (1 << index)
    return CellDistribution(p.labels, p.p[cells])
