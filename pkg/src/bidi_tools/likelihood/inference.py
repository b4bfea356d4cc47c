"""Deviance tests, fit results and summaries derived from fitted distributions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.special

from ..errors import DegenerateMargin, InvalidModelComparison, NegativeDeviance, NoConvergence
from ..graph.core import BidirectedGraph
from ..mobius.transforms import CellDistribution, ConnectedParams
from .kernel import CountTable

logger = logging.getLogger(__name__)


def chi2_upper_tail(x: float, df: int) -> float:
    """``P(chi2_df > x)`` via the regularized upper incomplete gamma function."""
    if df < 0:
        raise ValueError(f"Degrees of freedom must be nonnegative, got {df}")
    if df == 0:
        # point mass at zero
        return 1.0 if x <= 1e-12 else 0.0
    if x <= 0:
        return 1.0
    return float(scipy.special.gammaincc(0.5 * df, 0.5 * x))


def saturated_loglik(n: CountTable) -> float:
    mask = n.n > 0
    counts = n.n[mask]
    return float(np.dot(counts, np.log(counts / n.n_total)))


def saturated_dim(nvars: int) -> int:
    return (1 << nvars) - 1


@dataclass
class FitResult:
    """Outcome of a maximum-likelihood fit of a bi-directed graph model."""

    graph: BidirectedGraph
    p_hat: CellDistribution
    q_hat: ConnectedParams
    loglik: float
    deviance: float
    df: int
    p_value: float
    iterations: int
    converged: bool
    score_norm: float
    algorithm: str = "icf"
    history: List[float] = field(default_factory=list, repr=False)
    starts: int = 1
    model_dim: Optional[int] = None

    @property
    def dim(self) -> int:
        """Free parameters of the fitted model; restricted models override the catalog size."""
        if self.model_dim is not None:
            return self.model_dim
        return len(self.q_hat.catalog)

    def raise_for_convergence(self, max_cycles: Optional[int] = None) -> "FitResult":
        """Raise :class:`NoConvergence` unless the fit converged."""
        if not self.converged:
            raise NoConvergence(max_cycles if max_cycles is not None else self.iterations)
        return self


@dataclass(frozen=True)
class DevianceTest:
    deviance: float
    df: int
    p_value: float


def deviance_test(fit: FitResult, alt_loglik: float, alt_dim: int) -> DevianceTest:
    """Likelihood-ratio test of ``fit`` against a nesting alternative model."""
    deviance = 2.0 * (alt_loglik - fit.loglik)
    slack = 2e-8 * max(1.0, abs(alt_loglik))
    if deviance < -slack:
        raise NegativeDeviance(deviance)
    deviance = max(deviance, 0.0)
    df = alt_dim - fit.dim
    if df < 0:
        raise InvalidModelComparison(
            f"Alternative dimension {alt_dim} is smaller than the fitted dimension {fit.dim}"
        )
    return DevianceTest(deviance=deviance, df=df, p_value=chi2_upper_tail(deviance, df))


def pairwise_odds_ratios(p: CellDistribution) -> np.ndarray:
    """Symmetric matrix of two-way marginal odds ratios; the diagonal is NaN."""
    n = p.nvars
    tensor = p.tensor()
    out = np.full((n, n), np.nan)
    for v in range(n):
        for w in range(v + 1, n):
            drop = tuple(u for u in range(n) if u not in (v, w))
            m = tensor.sum(axis=drop) if drop else tensor
            if np.any(m <= 0):
                raise DegenerateMargin(v, w)
            ratio = m[0, 0] * m[1, 1] / (m[0, 1] * m[1, 0])
            out[v, w] = out[w, v] = ratio
    return out
