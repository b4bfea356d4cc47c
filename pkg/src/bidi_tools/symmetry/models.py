"""
Permutation-symmetry models and their intersection with bi-directed graph models.

A group of vertex permutations acts on cells by ``sigma(i)_v = i_{sigma(v)}``.
The symmetry model asks for equal probabilities along every cell orbit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..errors import GraphNotInvariant, InvalidCounts, SymmetryViolatedAtOptimum
from ..fitting.engines import fit_model
from ..fitting.options import FitOptions
from ..graph.core import BidirectedGraph, enumerate_connected_sets
from ..graph.groups import VertexPermutationGroup, is_invariant, orbit_of_set, permute_cell
from ..likelihood.inference import FitResult, chi2_upper_tail, saturated_dim, saturated_loglik
from ..likelihood.kernel import CountTable, loglik
from ..mobius.transforms import CellDistribution, MobiusVector

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-8
MOBIUS_SYMMETRY_TOLERANCE = 1e-10
# combined fits run to a tighter outer tolerance than plain fits
COMBINED_TOL_OUTER = 1e-10


@dataclass(frozen=True, eq=False)
class CellOrbitIndex:
    """Partition of the cells into group orbits.

    ``orbit_id[i]`` numbers orbits by their smallest cell; ``images[k]`` is the
    cell permutation induced by group element ``k``.
    """

    group: VertexPermutationGroup
    orbit_id: np.ndarray = field(repr=False)
    sizes: np.ndarray = field(repr=False)
    images: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, group: VertexPermutationGroup, nvars: int) -> "CellOrbitIndex":
        if group.nvars != nvars:
            raise InvalidCounts(f"Group acts on {group.nvars} variables, table has {nvars}")
        size = 1 << nvars
        images = np.array(
            [[permute_cell(perm, cell) for cell in range(size)] for perm in group.elements],
            dtype=np.intp,
        )
        # smallest image is a canonical orbit representative
        representative = images.min(axis=0)
        _, orbit_id, sizes = np.unique(representative, return_inverse=True, return_counts=True)
        return cls(group=group, orbit_id=orbit_id.reshape(-1), sizes=sizes, images=images)

    @property
    def norbits(self) -> int:
        return len(self.sizes)

    def orbits(self) -> List[np.ndarray]:
        return [np.flatnonzero(self.orbit_id == k) for k in range(self.norbits)]

    def average(self, values: np.ndarray) -> np.ndarray:
        """Replace every entry by the mean over its orbit."""
        totals = np.bincount(self.orbit_id, weights=values, minlength=self.norbits)
        return (totals / self.sizes)[self.orbit_id]

    def max_asymmetry(self, values: np.ndarray) -> float:
        return float(np.max(np.abs(values[self.images] - values[np.newaxis, :])))


def symmetry_mle(n: CountTable, s: VertexPermutationGroup) -> CellDistribution:
    """Orbit-averaged empirical distribution."""
    index = CellOrbitIndex.build(s, n.nvars)
    return CellDistribution(n.labels, index.average(n.n) / n.n_total)


def symmetric_counts(n: CountTable, s: VertexPermutationGroup) -> CountTable:
    """Counts averaged over cell orbits; real-valued in general."""
    index = CellOrbitIndex.build(s, n.nvars)
    return CountTable(n.labels, index.average(n.n))


def symmetry_model_dim(s: VertexPermutationGroup, nvars: int) -> int:
    return CellOrbitIndex.build(s, nvars).norbits - 1


def _require_invariant(g: BidirectedGraph, s: VertexPermutationGroup) -> None:
    if s.labels != g.labels or not is_invariant(g, s):
        raise GraphNotInvariant()


def connected_set_orbits(g: BidirectedGraph, s: VertexPermutationGroup) -> List[Tuple[int, ...]]:
    """Orbits of the connected sets, each sorted, listed by smallest member set."""
    _require_invariant(g, s)
    catalog = enumerate_connected_sets(g)
    orbits = {tuple(sorted(orbit_of_set(s, c))) for c in catalog}
    return sorted(orbits, key=lambda orbit: orbit[0])


def orbit_reciprocal_sum(g: BidirectedGraph, s: VertexPermutationGroup) -> Fraction:
    """Exact sum of ``1/|S(C)|`` over the connected sets."""
    _require_invariant(g, s)
    return sum(
        (Fraction(1, len(orbit_of_set(s, c))) for c in enumerate_connected_sets(g)), Fraction(0)
    )


def symmetric_independence_dim(g: BidirectedGraph, s: VertexPermutationGroup) -> int:
    """Dimension of the combined model: the number of connected-set orbits."""
    return len(connected_set_orbits(g, s))


def check_symmetric_mobius(
    q: MobiusVector,
    g: BidirectedGraph,
    s: VertexPermutationGroup,
    tol: float = MOBIUS_SYMMETRY_TOLERANCE,
) -> bool:
    """True iff ``q_C = q_{sigma(C)}`` for every connected set and group element."""
    _require_invariant(g, s)
    for c in enumerate_connected_sets(g):
        value = q.q[c]
        for image in orbit_of_set(s, c):
            if abs(q.q[image] - value) > tol:
                return False
    return True


def combined_fit(
    g: BidirectedGraph,
    s: VertexPermutationGroup,
    n: CountTable,
    opts: Optional[FitOptions] = None,
) -> FitResult:
    """Fit the intersection of the graph model and the symmetry model.

    ICF runs on the orbit-averaged counts. The fitted distribution must come
    out symmetric; statistics are recomputed with the observed counts.

    Raises:
        GraphNotInvariant: If ``s`` does not preserve the edges of ``g``
        SymmetryViolatedAtOptimum: If the fitted distribution is not symmetric
    """
    _require_invariant(g, s)
    if s.is_trivial():
        return fit_model(g, n, opts)

    index = CellOrbitIndex.build(s, n.nvars)
    averaged = CountTable(n.labels, index.average(n.n))
    opts = opts or FitOptions.from_settings()
    tight = opts.model_copy(update={"tol_outer": min(opts.tol_outer, COMBINED_TOL_OUTER)})
    fit = fit_model(g, averaged, tight)

    deviation = index.max_asymmetry(fit.p_hat.p)
    if deviation > SYMMETRY_TOLERANCE:
        raise SymmetryViolatedAtOptimum(deviation)

    dim = symmetric_independence_dim(g, s)
    ll = loglik(fit.p_hat, n)
    deviance = max(2.0 * (saturated_loglik(n) - ll), 0.0)
    df = saturated_dim(n.nvars) - dim
    logger.info(f"Combined fit: {dim} free parameters, deviance {deviance:.4f} on {df} df")
    return replace(
        fit,
        loglik=ll,
        deviance=deviance,
        df=df,
        p_value=chi2_upper_tail(deviance, df),
        model_dim=dim,
    )
