"""
Iterative Conditional Fitting.

Each update fixes the margin of all variables but one, maximizes the
conditional likelihood of that variable under the linear model constraints,
and reassembles the joint distribution. Cycling over the vertices never
decreases the likelihood and keeps every iterate inside the model.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np

from ..errors import NotInModel
from ..graph.core import BidirectedGraph, VertexLike, enumerate_connected_sets
from ..likelihood.inference import FitResult
from ..likelihood.kernel import CountTable, loglik, score
from ..mobius.transforms import CellDistribution, ConnectedParams, check_membership
from .common import finish_fit, prepare_counts, starting_points
from .inner import ConditionalTheta, build_constraints, conditional_cells, solve_inner
from .options import FitOptions

logger = logging.getLogger(__name__)

START_TOLERANCE = 1e-8


def _update(
    p: CellDistribution, v: int, n: CountTable, g: BidirectedGraph, opts: FitOptions
) -> Tuple[CellDistribution, ConditionalTheta]:
    constraints = build_constraints(p, v, g)
    theta0, margin = ConditionalTheta.from_distribution(p, v)
    c0, c1 = conditional_cells(p.nvars, v)
    solved = solve_inner(theta0, constraints, (n.n[c0], n.n[c1]), opts)

    out = np.empty_like(p.p)
    out[c0] = solved.theta * margin
    out[c1] = (1.0 - solved.theta) * margin
    return CellDistribution(p.labels, out / out.sum()), solved


def icf_update(
    p: CellDistribution,
    v: VertexLike,
    n: CountTable,
    g: BidirectedGraph,
    opts: Optional[FitOptions] = None,
) -> CellDistribution:
    """One conditional update of vertex ``v``; the margin of the others is unchanged."""
    index = g.check_vertex(v)
    updated, _ = _update(p, index, n, g, opts or FitOptions())
    return updated


def _run_from(
    start: CellDistribution,
    g: BidirectedGraph,
    n: CountTable,
    opts: FitOptions,
) -> Tuple[CellDistribution, int, bool, List[float], Optional[float]]:
    catalog = enumerate_connected_sets(g)
    p = start
    q_prev = ConnectedParams.from_distribution(p, catalog).q_c
    ll_prev = loglik(p, n)
    history = [ll_prev]
    warned = set()
    n_total = n.n_total

    current = ll_prev
    for cycle in range(1, opts.max_cycles + 1):
        for v in range(g.nvars):
            p, solved = _update(p, v, n, g, opts)
            after = loglik(p, n)
            if after < current - 1e-9 * max(1.0, abs(current)):
                logger.warning(
                    f"Update of vertex {v} lowered the log-likelihood by {current - after:.3e}"
                )
            current = after
            if solved.dropped_rows and v not in warned:
                warned.add(v)
                logger.warning(
                    f"Vertex {g.labels[v]}: dropped {solved.dropped_rows} dependent constraint rows"
                )

        q_now = ConnectedParams.from_distribution(p, catalog).q_c
        ll_now = current
        history.append(ll_now)
        dq = float(np.max(np.abs(q_now - q_prev)))
        dll = ll_now - ll_prev
        logger.debug(f"ICF cycle {cycle}: loglik={ll_now:.10f} max|dq|={dq:.3e}")
        q_prev, ll_prev = q_now, ll_now

        if dq < opts.tol_outer and abs(dll) < opts.tol_outer * n_total:
            score_norm = float(np.max(np.abs(score(ConnectedParams(catalog, q_now), n))))
            if score_norm <= opts.tol_score * n_total:
                return p, cycle, True, history, score_norm
            logger.debug(f"Cycle {cycle}: parameters settled but score norm is {score_norm:.3e}")

    logger.warning(f"ICF did not converge within {opts.max_cycles} cycles")
    return p, opts.max_cycles, False, history, None


def icf_fit(
    g: BidirectedGraph,
    n: CountTable,
    opts: Optional[FitOptions] = None,
    start: Optional[CellDistribution] = None,
) -> FitResult:
    """Maximum-likelihood fit of the model of ``g`` by Iterative Conditional Fitting.

    Args:
        g: Bi-directed graph defining the model
        n: Observed counts, labelled like ``g``
        opts: Fit options; defaults come from the settings
        start: Optional starting distribution inside the model (replaces the uniform start)

    Returns:
        FitResult whose ``converged`` flag reports whether the parameter,
        log-likelihood and score criteria were all met.

    Raises:
        ZeroCountsRejected: If ``n`` has empty cells and no pseudo count is set
        NotInModel: If ``start`` violates the model constraints
    """
    opts = opts or FitOptions.from_settings()
    fit_counts = prepare_counts(g, n, opts)
    catalog = enumerate_connected_sets(g)
    starts = starting_points(g.labels, opts)
    if start is not None:
        membership = check_membership(start, g, tol=START_TOLERANCE)
        if not membership.member:
            raise NotInModel(membership.max_residual)
        starts[0] = start

    logger.info(f"ICF fit: {g.nvars} vertices, {len(g.edges)} edges, {len(starts)} start(s)")
    if len(catalog) == (1 << g.nvars) - 1:
        # no disconnected sets: every update is unconstrained and the MLE is the table itself
        p = fit_counts.empirical()
        return finish_fit(
            g,
            n,
            fit_counts,
            p,
            ConnectedParams.from_distribution(p, catalog),
            iterations=1,
            converged=True,
            algorithm="icf",
            history=[loglik(p, fit_counts)],
            starts=1,
        )

    best = None
    for k, initial in enumerate(starts):
        p, cycles, converged, history, score_norm = _run_from(initial, g, fit_counts, opts)
        ll = history[-1]
        logger.debug(f"Start {k}: loglik={ll:.10f} after {cycles} cycles")
        if best is None or ll > best[-1]:
            best = (p, cycles, converged, history, score_norm, ll)

    p, cycles, converged, history, score_norm, _ = best
    result = finish_fit(
        g,
        n,
        fit_counts,
        p,
        ConnectedParams.from_distribution(p, catalog),
        iterations=cycles,
        converged=converged,
        algorithm="icf",
        history=history,
        starts=len(starts),
        score_norm=score_norm,
    )
    logger.info(
        f"ICF finished: loglik={result.loglik:.6f} cycles={cycles} converged={converged}"
    )
    return result
