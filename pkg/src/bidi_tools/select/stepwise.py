"""Backward stepwise edge selection driven by likelihood-ratio tests."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..config import get_settings
from ..errors import BidiError, InvalidOption
from ..fitting.engines import fit_model
from ..fitting.options import FitOptions
from ..graph.core import BidirectedGraph
from ..likelihood.inference import FitResult, deviance_test
from ..likelihood.kernel import CountTable

logger = logging.getLogger(__name__)


@dataclass
class StepwiseStep:
    """One accepted edge removal."""

    removed: Tuple[int, int]
    edge: str
    deviance: float
    df: int
    p_value: float
    dim: int
    loglik: float


@dataclass
class StepwiseTrace:
    alpha: float
    initial: FitResult
    graph: BidirectedGraph
    fit: FitResult
    steps: List[StepwiseStep] = field(default_factory=list)

    @property
    def total_deviance(self) -> float:
        return sum(step.deviance for step in self.steps)


@dataclass
class _Candidate:
    edge: Tuple[int, int]
    label: str
    graph: BidirectedGraph
    fit: FitResult
    deviance: float
    df: int
    p_value: float


def _fit_candidates(
    current: BidirectedGraph,
    current_fit: FitResult,
    n: CountTable,
    opts: FitOptions,
    max_workers: int,
) -> List[_Candidate]:
    graphs: Dict[Tuple[int, int], BidirectedGraph] = {
        edge: current.without_edge(*edge) for edge in current.edges
    }
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {edge: pool.submit(fit_model, graph, n, opts) for edge, graph in graphs.items()}

    candidates = []
    for edge in sorted(futures):
        label = current.edge_label(edge)
        try:
            fit = futures[edge].result()
            if not fit.converged:
                logger.warning(f"Skipping candidate without {label}: fit did not converge")
                continue
            test = deviance_test(fit, current_fit.loglik, current_fit.dim)
        except BidiError as exc:
            logger.warning(f"Skipping candidate without {label}: {exc}")
            continue
        logger.debug(
            f"Candidate -{label}: deviance={test.deviance:.4f} df={test.df} p={test.p_value:.4f}"
        )
        candidates.append(
            _Candidate(edge, label, graphs[edge], fit, test.deviance, test.df, test.p_value)
        )
    return candidates


def backward_stepwise(
    n: CountTable,
    alpha: float = 0.05,
    opts: Optional[FitOptions] = None,
    max_workers: Optional[int] = None,
) -> StepwiseTrace:
    """Remove edges one at a time, starting from the complete graph.

    Every single-edge deletion is tested against the current model; the edge
    whose removal has the largest p-value goes if that p-value exceeds
    ``alpha``. Ties go to the lexicographically smaller edge label.
    """
    if not 0 < alpha < 1:
        raise InvalidOption(f"alpha must lie in (0, 1), got {alpha}")
    opts = opts or FitOptions.from_settings()
    workers = max_workers or get_settings().max_workers

    current = BidirectedGraph.complete(n.labels)
    current_fit = fit_model(current, n, opts)
    trace = StepwiseTrace(alpha=alpha, initial=current_fit, graph=current, fit=current_fit)

    while current.edges:
        candidates = _fit_candidates(current, current_fit, n, opts, workers)
        if not candidates:
            logger.warning("No candidate model could be fitted; stopping")
            break
        best = min(candidates, key=lambda c: (-c.p_value, c.label))
        if best.p_value <= alpha:
            logger.info(f"Stopping: best removal {best.label} has p={best.p_value:.4f}")
            break

        logger.info(
            f"Removing {best.label}: deviance={best.deviance:.4f} df={best.df} p={best.p_value:.4f}"
        )
        trace.steps.append(
            StepwiseStep(
                removed=best.edge,
                edge=best.label,
                deviance=best.deviance,
                df=best.df,
                p_value=best.p_value,
                dim=best.fit.dim,
                loglik=best.fit.loglik,
            )
        )
        current, current_fit = best.graph, best.fit

    trace.graph = current
    trace.fit = current_fit
    return trace
