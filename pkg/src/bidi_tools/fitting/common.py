"""Pieces shared by the fitting engines: count preparation, starts, result assembly."""

from __future__ import annotations

import logging
from typing import List, Optional

import numpy as np

from ..errors import InvalidCounts, ZeroCountsRejected
from ..graph.core import BidirectedGraph
from ..likelihood.inference import FitResult, chi2_upper_tail, saturated_dim, saturated_loglik
from ..likelihood.kernel import CountTable, loglik, score
from ..mobius.transforms import CellDistribution, ConnectedParams
from .options import FitOptions

logger = logging.getLogger(__name__)


def prepare_counts(g: BidirectedGraph, n: CountTable, opts: FitOptions) -> CountTable:
    """Counts the engines maximize: the observed table, smoothed when asked."""
    if n.labels != g.labels:
        raise InvalidCounts(f"Count labels {n.labels} do not match graph labels {g.labels}")
    zeros = n.zero_cells
    if opts.pseudo_count is not None:
        logger.warning(f"Adding pseudo count {opts.pseudo_count} to all {len(n.n)} cells")
        return n.with_pseudo_count(opts.pseudo_count)
    if zeros:
        raise ZeroCountsRejected(zeros)
    return n


def starting_points(labels, opts: FitOptions) -> List[CellDistribution]:
    """Uniform start first, then random products of independent Bernoulli margins."""
    starts = [CellDistribution.uniform(labels)]
    if opts.multi_start > 1:
        rng = np.random.default_rng(opts.seed)
        nvars = len(labels)
        for _ in range(opts.multi_start - 1):
            prob_zero = rng.uniform(0.2, 0.8, size=nvars)
            tensor = np.ones(())
            for v in range(nvars):
                tensor = np.multiply.outer(tensor, [prob_zero[v], 1.0 - prob_zero[v]])
            # axis v is vertex v; transpose to cell order
            flat = tensor.T.reshape(-1)
            starts.append(CellDistribution(tuple(labels), flat / flat.sum()))
    return starts


def finish_fit(
    g: BidirectedGraph,
    n: CountTable,
    fit_counts: CountTable,
    p_hat: CellDistribution,
    q_hat: ConnectedParams,
    iterations: int,
    converged: bool,
    algorithm: str,
    history: Optional[List[float]] = None,
    starts: int = 1,
    score_norm: Optional[float] = None,
) -> FitResult:
    """Assemble a :class:`FitResult`; statistics use the observed counts."""
    if score_norm is None:
        score_norm = float(np.max(np.abs(score(q_hat, fit_counts))))
    ll = loglik(p_hat, n)
    deviance = max(2.0 * (saturated_loglik(n) - ll), 0.0)
    df = saturated_dim(g.nvars) - len(q_hat.catalog)
    return FitResult(
        graph=g,
        p_hat=p_hat,
        q_hat=q_hat,
        loglik=ll,
        deviance=deviance,
        df=df,
        p_value=chi2_upper_tail(deviance, df),
        iterations=iterations,
        converged=converged,
        score_norm=score_norm,
        algorithm=algorithm,
        history=list(history or []),
        starts=starts,
    )
