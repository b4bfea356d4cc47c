"""
Run reports printed by the CLI.

Reports are pydantic models. ``RunReport.to_json`` rounds every float to
10 significant digits and sorts keys, so identical inputs give identical bytes.
"""

import json
import logging
import math
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from bidi_tools.errors import DegenerateMargin, SingularInformation, ZeroMarginal
from bidi_tools.fitting.options import FitOptions
from bidi_tools.graph.core import (
    BidirectedGraph,
    count_complete_sets,
    enumerate_connected_sets,
    pairwise_independences,
    popcount,
)
from bidi_tools.likelihood.inference import DevianceTest, FitResult, pairwise_odds_ratios
from bidi_tools.likelihood.kernel import CountTable, observed_information, standard_errors
from bidi_tools.mobius.transforms import (
    CellDistribution,
    MembershipReport,
    MobiusVector,
    cell_pattern,
    dependence_ratios,
    mobius_forward,
)

from . import __version__

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
SIGNIFICANT_DIGITS = 10


class ModelBlock(BaseModel):
    vertices: List[str]
    edges: List[str]
    dimension: int
    connected_sets: int
    complete_sets: int
    df: int
    pairwise_independences: List[str]


class FitBlock(BaseModel):
    algorithm: str
    loglik: float
    deviance: float
    df: int
    p_value: float
    iterations: int
    converged: bool
    score_norm: float
    starts: int
    tolerances: Dict[str, float]


class EstimatesBlock(BaseModel):
    cells: Dict[str, float]
    mobius: Dict[str, float]
    dependence_ratios: Dict[str, float] = Field(default_factory=dict)
    odds_ratios: Dict[str, float] = Field(default_factory=dict)
    standard_errors: Dict[str, float] = Field(default_factory=dict)


class Violator(BaseModel):
    set: str
    residual: float


class MembershipBlock(BaseModel):
    member: bool
    max_residual: float
    tol: float
    violators: List[Violator]


class DevianceBlock(BaseModel):
    name: str
    dimension: int
    deviance: float
    df: int
    p_value: float


class SymmetryBlock(BaseModel):
    group: List[str]
    order: int
    cell_orbits: int
    connected_set_orbits: int
    symmetry_model: DevianceBlock
    comparison: DevianceBlock


class StepBlock(BaseModel):
    edge: str
    deviance: float
    df: int
    p_value: float
    dimension: int


class StepwiseBlock(BaseModel):
    alpha: float
    initial_dimension: int
    total_deviance: float
    steps: List[StepBlock]


class ProvenanceBlock(BaseModel):
    tool_version: str = __version__
    inputs: Dict[str, str]
    options: Dict[str, Any] = Field(default_factory=dict)


class RunReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    command: str
    model: Optional[ModelBlock] = None
    fit: Optional[FitBlock] = None
    estimates: Optional[EstimatesBlock] = None
    membership: Optional[MembershipBlock] = None
    symmetry: Optional[SymmetryBlock] = None
    stepwise: Optional[StepwiseBlock] = None
    provenance: ProvenanceBlock

    def to_json(self) -> str:
        data = _normalize(self.model_dump(exclude_none=True))
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def _normalize(value: Any) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    return value


# ---------------------------------------------------------------------------
# Block builders
# ---------------------------------------------------------------------------


def pattern_key(cell: int, nvars: int) -> str:
    """Cell pattern as a 0/1 string in label order."""
    return "".join(str(x) for x in cell_pattern(cell, nvars))


def model_block(g: BidirectedGraph, dimension: Optional[int] = None) -> ModelBlock:
    catalog = enumerate_connected_sets(g)
    dim = len(catalog) if dimension is None else dimension
    return ModelBlock(
        vertices=list(g.labels),
        edges=[g.edge_label(e) for e in g.edges],
        dimension=dim,
        connected_sets=len(catalog),
        complete_sets=count_complete_sets(g),
        df=(1 << g.nvars) - 1 - dim,
        pairwise_independences=[
            f"{g.labels[v]} _|_ {g.labels[w]}" for v, w in pairwise_independences(g)
        ],
    )


def fit_block(fit: FitResult, opts: FitOptions) -> FitBlock:
    tolerances = {"outer": opts.tol_outer, "inner": opts.tol_inner, "score": opts.tol_score}
    return FitBlock(
        algorithm=fit.algorithm,
        loglik=fit.loglik,
        deviance=fit.deviance,
        df=fit.df,
        p_value=fit.p_value,
        iterations=fit.iterations,
        converged=fit.converged,
        score_norm=fit.score_norm,
        starts=fit.starts,
        tolerances=tolerances,
    )


def cells_of(p: CellDistribution) -> Dict[str, float]:
    return {pattern_key(i, p.nvars): float(x) for i, x in enumerate(p.p)}


def mobius_of(
    q: MobiusVector, g: BidirectedGraph, masks: Optional[List[int]] = None
) -> Dict[str, float]:
    masks = list(range(1, 1 << q.nvars)) if masks is None else masks
    return {g.format_set(a): q[a] for a in masks}


def mobius_standard_errors(fit: FitResult, counts: CountTable) -> Dict[str, float]:
    """Standard errors of the connected Möbius parameters from the observed information."""
    try:
        se = standard_errors(observed_information(fit, counts))
    except SingularInformation as exc:
        logger.warning(f"No standard errors: {exc.message}")
        return {}
    return dict(zip(fit.q_hat.catalog.labels(), (float(x) for x in se)))


def estimates_block(fit: FitResult, counts: Optional[CountTable] = None) -> EstimatesBlock:
    """Estimates of a fit; standard errors are included when ``counts`` is given."""
    g = fit.graph
    catalog = fit.q_hat.catalog
    q = mobius_forward(fit.p_hat)
    try:
        tau = dependence_ratios(q)
        ratios = {g.format_set(c): tau[c] for c in catalog if popcount(c) >= 2}
    except ZeroMarginal:
        ratios = {}
    try:
        odds = pairwise_odds_ratios(fit.p_hat)
        pairs = {
            f"{g.labels[v]},{g.labels[w]}": float(odds[v, w])
            for v in range(g.nvars)
            for w in range(v + 1, g.nvars)
        }
    except DegenerateMargin:
        pairs = {}
    return EstimatesBlock(
        cells=cells_of(fit.p_hat),
        mobius=fit.q_hat.as_dict(),
        dependence_ratios=ratios,
        odds_ratios=pairs,
        standard_errors=mobius_standard_errors(fit, counts) if counts is not None else {},
    )


def membership_block(report: MembershipReport, g: BidirectedGraph) -> MembershipBlock:
    return MembershipBlock(
        member=report.member,
        max_residual=report.max_residual,
        tol=report.tol,
        violators=[Violator(set=g.format_set(d), residual=r) for d, r in report.violators],
    )


def deviance_block(name: str, dimension: int, test: DevianceTest) -> DevianceBlock:
    return DevianceBlock(
        name=name, dimension=dimension, deviance=test.deviance, df=test.df, p_value=test.p_value
    )
