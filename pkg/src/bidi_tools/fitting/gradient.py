"""
Quasi-Newton ascent on the logarithms of the connected-set parameters.

Working with ``x = log q_C`` turns the multiplicative model constraints into
sums. Points that leave the Möbius simplex are treated as having
log-likelihood minus infinity and are rejected by the backtracking search.
"""

from __future__ import annotations

import logging
from typing import Optional, Tuple

import numpy as np

from ..errors import LogOfZero, OutsideSimplex
from ..graph.core import BidirectedGraph, enumerate_connected_sets
from ..likelihood.inference import FitResult
from ..likelihood.kernel import CountTable, loglik, score
from ..mobius.transforms import ConnectedParams, parametrize
from .common import finish_fit, prepare_counts, starting_points
from .options import FitOptions

logger = logging.getLogger(__name__)

MAX_BACKTRACKS = 60


class _Objective:
    """Negative log-likelihood per observation as a function of ``log q_C``."""

    def __init__(self, g: BidirectedGraph, n: CountTable):
        self.catalog = enumerate_connected_sets(g)
        self.n = n
        self.scale = 1.0 / n.n_total

    def params(self, x: np.ndarray) -> ConnectedParams:
        return ConnectedParams(self.catalog, np.exp(x))

    def value(self, x: np.ndarray) -> float:
        if np.any(x > 0):
            return np.inf
        try:
            return -self.scale * loglik(parametrize(self.params(x)), self.n)
        except (OutsideSimplex, LogOfZero):
            return np.inf

    def gradient(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Gradient in ``x`` and the raw score in ``q_C``."""
        params = self.params(x)
        raw = score(params, self.n)
        return -self.scale * params.q_c * raw, raw


def _bfgs(
    objective: _Objective, x: np.ndarray, opts: FitOptions
) -> Tuple[np.ndarray, int, bool, list]:
    n_total = objective.n.n_total
    f = objective.value(x)
    grad, raw = objective.gradient(x)
    inverse_hessian = np.eye(len(x))
    history = [-f * n_total]
    restarted = False

    for iteration in range(1, opts.max_cycles + 1):
        if np.max(np.abs(raw)) <= opts.tol_score * n_total:
            return x, iteration - 1, True, history

        direction = -inverse_hessian @ grad
        slope = float(grad @ direction)
        if slope >= 0:
            inverse_hessian = np.eye(len(x))
            direction = -grad
            slope = float(grad @ direction)

        step = 1.0
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            trial = x + step * direction
            f_trial = objective.value(trial)
            if np.isfinite(f_trial) and f_trial <= f + opts.armijo_sigma * step * slope:
                accepted = True
                break
            step *= opts.armijo_beta

        if not accepted:
            if restarted:
                logger.warning(f"Gradient fit stalled at iteration {iteration}")
                return x, iteration, False, history
            restarted = True
            inverse_hessian = np.eye(len(x))
            continue
        restarted = False

        grad_trial, raw_trial = objective.gradient(trial)
        s = trial - x
        y = grad_trial - grad
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s) * np.linalg.norm(y)):
            rho = 1.0 / sy
            eye = np.eye(len(x))
            left = eye - rho * np.outer(s, y)
            inverse_hessian = left @ inverse_hessian @ left.T + rho * np.outer(s, s)

        x, f, grad, raw = trial, f_trial, grad_trial, raw_trial
        history.append(-f * n_total)
        logger.debug(f"BFGS iteration {iteration}: loglik={-f * n_total:.10f} step={step:.3e}")

    converged = bool(np.max(np.abs(raw)) <= opts.tol_score * n_total)
    if not converged:
        logger.warning(f"Gradient fit did not converge within {opts.max_cycles} iterations")
    return x, opts.max_cycles, converged, history


def gradient_fit(
    g: BidirectedGraph,
    n: CountTable,
    opts: Optional[FitOptions] = None,
) -> FitResult:
    """Maximum-likelihood fit by BFGS on ``log q_C`` with Armijo backtracking."""
    opts = opts or FitOptions.from_settings()
    fit_counts = prepare_counts(g, n, opts)
    objective = _Objective(g, fit_counts)
    catalog = objective.catalog

    logger.info(f"Gradient fit: {g.nvars} vertices, {len(catalog)} parameters")
    best = None
    for initial in starting_points(g.labels, opts):
        x0 = np.log(ConnectedParams.from_distribution(initial, catalog).q_c)
        x, iterations, converged, history = _bfgs(objective, x0, opts)
        if best is None or history[-1] > best[3][-1]:
            best = (x, iterations, converged, history)

    x, iterations, converged, history = best
    params = objective.params(x)
    p_hat = parametrize(params)
    result = finish_fit(
        g,
        n,
        fit_counts,
        p_hat,
        params,
        iterations=iterations,
        converged=converged,
        algorithm="gradient",
        history=history,
        starts=opts.multi_start,
    )
    logger.info(f"Gradient fit finished: loglik={result.loglik:.6f} converged={converged}")
    return result
