"""
Multinomial log-likelihood and its derivatives in connected-set coordinates.

Derivatives are indexed by the vertex set ``A`` of the cell
``(0_A, 1_{V-A})``; an A-ordered vector is the cell-ordered vector reversed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..errors import BidiError, InvalidCounts, LogOfZero, SingularInformation
from ..graph.core import BidirectedGraph, spouse_set
from ..mobius.transforms import CellDistribution, ConnectedParams, MobiusVector, parametrize

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CountTable:
    """Observed cell counts; real-valued counts are accepted (averaged tables)."""

    labels: Tuple[str, ...]
    n: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        arr = np.asarray(self.n, dtype=float)
        size = 1 << len(self.labels)
        if arr.shape != (size,):
            raise InvalidCounts(f"Expected {size} cell counts, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0:
            raise InvalidCounts("Counts must be finite and nonnegative")
        if arr.sum() <= 0:
            raise InvalidCounts("Count table is empty")
        arr.setflags(write=False)
        object.__setattr__(self, "n", arr)

    @property
    def nvars(self) -> int:
        return len(self.labels)

    @property
    def n_total(self) -> float:
        return float(self.n.sum())

    @property
    def zero_cells(self) -> int:
        return int(np.count_nonzero(self.n == 0))

    def empirical(self) -> CellDistribution:
        return CellDistribution(self.labels, self.n / self.n_total)

    def with_pseudo_count(self, eps: float) -> "CountTable":
        return CountTable(self.labels, self.n + eps)

    def flipped(self, v: int) -> "CountTable":
        cells = np.arange(1 << self.nvars) ^ (1 << v)
        return CountTable(self.labels, self.n[cells])


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _popcounts(nvars: int) -> np.ndarray:
    counts = np.zeros(1 << nvars, dtype=np.int64)
    for k in range(nvars):
        counts.reshape(-1, 2, 1 << k)[:, 1, :] += 1
    return counts


def _parity_sign(popcounts: np.ndarray, masks: np.ndarray) -> np.ndarray:
    return 1.0 - 2.0 * (popcounts[masks] & 1)


class _MarginalTables:
    """Lazily computed tables ``W -> (p^W_A for every A)`` for one distribution."""

    def __init__(self, p: CellDistribution):
        self.nvars = p.nvars
        self.tensor = p.tensor()
        self._cache: Dict[int, np.ndarray] = {}

    def __call__(self, w: int) -> np.ndarray:
        table = self._cache.get(w)
        if table is None:
            n = self.nvars
            drop = tuple(v for v in range(n) if not w >> v & 1)
            marg = self.tensor.sum(axis=drop, keepdims=True) if drop else self.tensor
            flat = np.broadcast_to(marg, (2,) * n).T.reshape(-1)
            # entry A holds P(X_{A&W} = 0, X_{W-A} = 1)
            table = flat[::-1].copy()
            self._cache[w] = table
        return table


def _weights(p: CellDistribution, n: CountTable) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """A-ordered positive-count support, counts and probabilities."""
    n_a = n.n[::-1]
    p_a = p.p[::-1]
    support = n_a > 0
    bad = support & (p_a <= 0)
    if bad.any():
        a = int(np.flatnonzero(bad)[0])
        raise LogOfZero(len(p_a) - 1 - a)
    return support, n_a, p_a


def _check_labels(labels: Sequence[str], n: CountTable) -> None:
    if tuple(labels) != n.labels:
        raise InvalidCounts(f"Count labels {n.labels} do not match model labels {tuple(labels)}")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def loglik(p: CellDistribution, n: CountTable) -> float:
    """Kernel ``sum_i n(i) log p_i`` without the multinomial coefficient."""
    _check_labels(p.labels, n)
    mask = n.n > 0
    if np.any(p.p[mask] <= 0):
        cell = int(np.flatnonzero(mask & (p.p <= 0))[0])
        raise LogOfZero(cell)
    return float(np.dot(n.n[mask], np.log(p.p[mask])))


def expansion_support(c: int, a: int, g: BidirectedGraph) -> bool:
    """True iff ``q_c`` occurs in the expansion of ``p^V_a``."""
    return spouse_set(g, c) & (a & ~c) == 0


def marginal_prob(q: MobiusVector, a: int, w: int) -> float:
    """``P(X_a = 0, X_{w-a} = 1)`` by alternating sums of Möbius parameters."""
    if a & ~w:
        raise BidiError(f"Set {a:#x} is not contained in {w:#x}")
    rest = w & ~a
    total = 0.0
    sub = rest
    while True:
        sign = -1.0 if bin(sub).count("1") & 1 else 1.0
        total += sign * q.q[a | sub]
        if sub == 0:
            break
        sub = (sub - 1) & rest
    return float(total)


def cell_jacobian(params: ConnectedParams, p: Optional[CellDistribution] = None) -> np.ndarray:
    """Matrix ``J[A, j] = d p^V_A / d q_{C_j}`` over all cells and connected sets."""
    catalog = params.catalog
    if p is None:
        p = parametrize(params)
    n = p.nvars
    cells = np.arange(1 << n, dtype=np.int64)
    popcounts = _popcounts(n)
    tables = _MarginalTables(p)
    full = (1 << n) - 1
    jac = np.zeros((1 << n, len(catalog)))
    for j, (c, spo) in enumerate(zip(catalog.masks, catalog.spouses)):
        c, spo = int(c), int(spo)
        support = (cells & ~c & spo) == 0
        a = cells[support]
        table = tables(full & ~spo)
        jac[support, j] = _parity_sign(popcounts, c & ~a) * table[a & ~c]
    return jac


def score(params: ConnectedParams, n: CountTable) -> np.ndarray:
    """Gradient of the log-likelihood with respect to the connected-set parameters."""
    _check_labels(params.graph.labels, n)
    p = parametrize(params)
    support, n_a, p_a = _weights(p, n)
    jac = cell_jacobian(params, p)
    return jac[support].T @ (n_a[support] / p_a[support])


def hessian(params: ConnectedParams, n: CountTable) -> np.ndarray:
    """Second derivatives of the log-likelihood in connected-set coordinates.

    The product term ``-J' diag(n/p^2) J`` is always present; the curvature of
    ``p^V_A`` itself is nonzero only for disjoint, non-adjacent pairs of sets.
    """
    _check_labels(params.graph.labels, n)
    catalog = params.catalog
    p = parametrize(params)
    support, n_a, p_a = _weights(p, n)
    jac = cell_jacobian(params, p)

    js = jac[support]
    w2 = n_a[support] / p_a[support] ** 2
    hess = -(js.T * w2) @ js

    nvars = p.nvars
    full = (1 << nvars) - 1
    cells = np.arange(1 << nvars, dtype=np.int64)[support]
    ratio = n_a[support] / p_a[support]
    popcounts = _popcounts(nvars)
    tables = _MarginalTables(p)
    masks = [int(m) for m in catalog.masks]
    spouses = [int(s) for s in catalog.spouses]
    for j in range(len(masks)):
        for k in range(j + 1, len(masks)):
            if masks[k] & spouses[j]:
                continue
            union = masks[j] | masks[k]
            spo = spouses[j] | spouses[k]
            ok = (cells & ~union & spo) == 0
            if not ok.any():
                continue
            a = cells[ok]
            table = tables(full & ~spo)
            term = _parity_sign(popcounts, union & ~a) * table[a & ~union]
            value = float(np.dot(ratio[ok], term))
            hess[j, k] += value
            hess[k, j] += value
    return hess


def expected_information(params: ConnectedParams, n_total: float) -> np.ndarray:
    """Fisher information with ``n_total * p_A`` in place of the observed counts."""
    p = parametrize(params)
    jac = cell_jacobian(params, p)
    p_a = p.p[::-1]
    live = p_a > 0
    jl = jac[live]
    return n_total * (jl.T / p_a[live]) @ jl


def observed_information(fit, n: CountTable) -> np.ndarray:
    """Negative Hessian at a fitted model."""
    return -hessian(fit.q_hat, n)


def standard_errors(information: np.ndarray) -> np.ndarray:
    """Square roots of the diagonal of the inverse information matrix."""
    info = 0.5 * (information + information.T)
    try:
        factor = scipy.linalg.cho_factor(info, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise SingularInformation(f"Information matrix is not positive definite: {exc}") from exc
    cov = scipy.linalg.cho_solve(factor, np.eye(info.shape[0]))
    return np.sqrt(np.diag(cov))
