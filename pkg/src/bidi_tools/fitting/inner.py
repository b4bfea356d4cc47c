"""
Constrained conditional maximization for a single ICF update.

With the margin of ``X_{V-v}`` held fixed, the model constraints become
linear in the conditional probabilities ``theta(s) = P(X_v = 0 | X_{V-v} = s)``.
The objective ``sum n0 log(theta) + n1 log(1 - theta)`` is separable and
strictly concave, so the solvers below only need a diagonal Hessian and a
projection onto the null space of the constraint matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from ..errors import InnerNoConvergence, ZeroConditioningEvent
from ..graph.core import BidirectedGraph, VertexLike, bit, enumerate_disconnected_containing
from ..mobius.transforms import CellDistribution
from .options import FitOptions

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10
# gains below this fraction of |objective| are lost in the sum of logs
ROUNDOFF_GAIN = 64 * np.finfo(float).eps
STALL_STEP = 4 * np.finfo(float).eps


@dataclass
class ConditionalTheta:
    """Conditional parameters of one vertex, indexed like the cells with ``X_v = 0``."""

    vertex: int
    theta: np.ndarray = field(repr=False)
    iterations: int = 0
    dropped_rows: int = 0

    @classmethod
    def from_distribution(
        cls, p: CellDistribution, v: int
    ) -> Tuple["ConditionalTheta", np.ndarray]:
        """Split ``p`` into ``theta`` and the margin over the other variables."""
        c0, c1 = conditional_cells(p.nvars, v)
        margin = p.p[c0] + p.p[c1]
        theta = np.full(margin.shape, 0.5)
        live = margin > 0
        theta[live] = p.p[c0][live] / margin[live]
        return cls(vertex=v, theta=theta), margin


@dataclass
class ConstraintMatrix:
    """Rows ``(D, C_v(D))`` over the disconnected sets D containing ``v``."""

    vertex: int
    rows: List[Tuple[int, int]]
    matrix: np.ndarray = field(repr=False)

    @property
    def nrows(self) -> int:
        return self.matrix.shape[0]

    def residual(self, theta: np.ndarray) -> np.ndarray:
        return self.matrix @ theta


def conditional_cells(nvars: int, v: int) -> Tuple[np.ndarray, np.ndarray]:
    """Cells with ``X_v = 0`` in ascending order, and their ``X_v = 1`` partners."""
    cells = np.arange(1 << nvars, dtype=np.int64)
    c0 = cells[(cells >> v & 1) == 0]
    return c0, c0 | bit(v)


def _margin_mass(margin: np.ndarray, c0: np.ndarray, mask: int) -> float:
    if mask == 0:
        return float(margin.sum())
    return float(margin[(c0 & mask) == 0].sum())


def build_constraints(p: CellDistribution, v: VertexLike, g: BidirectedGraph) -> ConstraintMatrix:
    """Linear constraints on ``theta_v`` that keep the updated distribution in the model.

    Row ``r`` for ``(D, C)`` reads
    ``P(X_{V-D} = s | X_{D-v} = 0) I{s_{D-v} = 0} - P(X_{V-C} = s | X_{C-v} = 0) I{s_{C-v} = 0}``
    with all probabilities taken from the current margin.
    """
    index = g.check_vertex(v)
    pairs = enumerate_disconnected_containing(g, index)
    c0, c1 = conditional_cells(g.nvars, index)
    margin = p.p[c0] + p.p[c1]
    vbit = bit(index)
    matrix = np.zeros((len(pairs), len(c0)))
    for r, (d, c) in enumerate(pairs):
        d_rest = d & ~vbit
        c_rest = c & ~vbit
        mass_d = _margin_mass(margin, c0, d_rest)
        mass_c = _margin_mass(margin, c0, c_rest)
        if mass_d <= 0:
            raise ZeroConditioningEvent(d_rest)
        if mass_c <= 0:
            raise ZeroConditioningEvent(c_rest)
        in_d = (c0 & d_rest) == 0
        in_c = (c0 & c_rest) == 0
        matrix[r] = margin * in_d / mass_d - margin * in_c / mass_c
    return ConstraintMatrix(vertex=index, rows=list(pairs), matrix=matrix)


def _null_projector(matrix: np.ndarray) -> Tuple[Optional[np.ndarray], int]:
    """Orthonormal basis of the row space and the number of dependent rows dropped."""
    if matrix.shape[0] == 0:
        return None, 0
    q, r, _ = scipy.linalg.qr(matrix.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0:
        return None, matrix.shape[0]
    rank = int(np.count_nonzero(diag > RANK_TOLERANCE * diag[0]))
    return q[:, :rank], matrix.shape[0] - rank


def _project(basis: Optional[np.ndarray], x: np.ndarray) -> np.ndarray:
    if basis is None:
        return x
    return x - basis @ (basis.T @ x)


def _interior_step(theta: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """``theta + t * delta`` for the largest ``t`` in ``{1, 1/2, ...}`` staying in (0, 1)."""
    for _ in range(60):
        trial = theta + delta
        if np.all(trial > 0) and np.all(trial < 1):
            return trial
        delta = 0.5 * delta
    return theta


def _objective(theta: np.ndarray, n0: np.ndarray, n1: np.ndarray) -> float:
    with np.errstate(divide="ignore"):
        return float(np.dot(n0, np.log(theta)) + np.dot(n1, np.log1p(-theta)))


def solve_inner(
    theta0: ConditionalTheta,
    constraints: ConstraintMatrix,
    n_slices: Tuple[np.ndarray, np.ndarray],
    opts: Optional[FitOptions] = None,
) -> ConditionalTheta:
    """Maximize the conditional log-likelihood over ``{theta : A theta = 0}``.

    ``theta0`` must be feasible; every step stays in the null space of ``A``
    and inside ``(0, 1)``. ``n_slices`` holds the counts with ``X_v = 0`` and
    ``X_v = 1``, aligned with ``theta``.
    """
    opts = opts or FitOptions()
    n0, n1 = (np.asarray(x, dtype=float) for x in n_slices)
    theta = theta0.theta.astype(float).copy()
    v = theta0.vertex
    a = constraints.matrix

    if a.shape[0] == 0:
        total = n0 + n1
        live = total > 0
        theta[live] = n0[live] / total[live]
        return ConditionalTheta(vertex=v, theta=theta, iterations=1)

    basis0, dropped = _null_projector(a)
    if dropped:
        logger.debug(f"Vertex {v}: {dropped} of {a.shape[0]} constraint rows are dependent")

    scale_tol = opts.tol_inner * max(1.0, float(n0.sum() + n1.sum()))
    newton = opts.inner_method == "projected-newton"
    value = _objective(theta, n0, n1)

    for iteration in range(1, opts.max_inner_iters + 1):
        grad = n0 / theta - n1 / (1.0 - theta)
        pgrad = _project(basis0, grad)
        if np.max(np.abs(pgrad)) <= scale_tol:
            return ConditionalTheta(v, theta, iteration - 1, dropped)

        curvature = n0 / theta**2 + n1 / (1.0 - theta) ** 2
        if newton:
            s = 1.0 / np.sqrt(curvature)
            basis, _ = _null_projector(a * s)
            direction = s * _project(basis, s * grad)
            step = 1.0
        else:
            direction = pgrad
            denom = float(np.dot(curvature, direction**2))
            step = float(np.dot(direction, direction)) / denom if denom > 0 else 1.0

        slope = float(np.dot(grad, direction))
        if slope <= 0:
            # projected direction lost ascent to round-off
            return ConditionalTheta(v, theta, iteration - 1, dropped)

        if 0.5 * step * slope <= ROUNDOFF_GAIN * max(1.0, abs(value)):
            # objective values no longer resolve the gain; finish with the model step
            theta = _interior_step(theta, step * direction)
            logger.debug(f"Vertex {v}: predicted gain below round-off after {iteration} steps")
            return ConditionalTheta(v, theta, iteration, dropped)

        accepted = False
        for _ in range(60):
            trial = theta + step * direction
            if np.all(trial > 0) and np.all(trial < 1):
                trial_value = _objective(trial, n0, n1)
                if trial_value >= value + opts.armijo_sigma * step * slope:
                    accepted = True
                    break
            step *= opts.armijo_beta

        if not accepted:
            if slope <= 1e-12 * max(1.0, abs(value)):
                return ConditionalTheta(v, theta, iteration - 1, dropped)
            raise InnerNoConvergence(v, iteration)

        moved = float(np.max(np.abs(trial - theta)))
        theta = trial
        value = trial_value
        if moved <= STALL_STEP:
            logger.debug(f"Vertex {v}: accepted step of {moved:.1e} leaves theta in place")
            return ConditionalTheta(v, theta, iteration, dropped)

    grad = n0 / theta - n1 / (1.0 - theta)
    if np.max(np.abs(_project(basis0, grad))) <= scale_tol:
        return ConditionalTheta(v, theta, opts.max_inner_iters, dropped)
    raise InnerNoConvergence(v, opts.max_inner_iters)
