"""
Unit tests for permutation-symmetry models.

Cell orbits are checked against a brute-force application of every group element.
"""

from fractions import Fraction

import numpy as np
import pytest

from bidi_tools.errors import GraphNotInvariant, InvalidCounts
from bidi_tools.fitting.icf import icf_fit
from bidi_tools.graph.core import BidirectedGraph
from bidi_tools.graph.groups import VertexPermutationGroup, permute_cell
from bidi_tools.mobius.transforms import (
    check_membership,
    extend_connected,
    mobius_forward,
    mobius_inverse,
    parametrize,
)
from bidi_tools.symmetry.models import (
    CellOrbitIndex,
    check_symmetric_mobius,
    combined_fit,
    connected_set_orbits,
    orbit_reciprocal_sum,
    symmetric_counts,
    symmetric_independence_dim,
    symmetry_mle,
    symmetry_model_dim,
)


def brute_orbits(group, nvars):
    orbits = set()
    for cell in range(1 << nvars):
        orbits.add(frozenset(permute_cell(perm, cell) for perm in group.elements))
    return orbits


class TestCellOrbitIndex:
    """Test the partition of cells into orbits."""

    def test_twin_orbits(self, twin_group):
        """Test the 16 twin cells fall into 10 orbits."""
        index = CellOrbitIndex.build(twin_group, 4)
        assert index.norbits == 10
        assert index.sizes.sum() == 16
        assert sorted(index.sizes.tolist()) == [1] * 4 + [2] * 6

    @pytest.mark.parametrize(
        "text,labels",
        [
            ("(a b)", ("a", "b", "c")),
            ("(a b c)", ("a", "b", "c")),
            ("(a b)\n(c d)", ("a", "b", "c", "d")),
            ("(a b c d e)\n(a b)", ("a", "b", "c", "d", "e")),
        ],
    )
    def test_orbits_match_brute_force(self, text, labels):
        """Test orbits equal the sets of images of each cell."""
        group = VertexPermutationGroup.parse(text, labels)
        index = CellOrbitIndex.build(group, len(labels))
        ours = {frozenset(orbit.tolist()) for orbit in index.orbits()}
        assert ours == brute_orbits(group, len(labels))

    def test_average_is_invariant(self, twin_group, random_counts):
        """Test orbit averages are fixed by every group element."""
        index = CellOrbitIndex.build(twin_group, 4)
        counts = random_counts(("A1", "A2", "D1", "D2"), seed=4)
        averaged = index.average(counts.n.astype(float))
        assert index.max_asymmetry(averaged) == 0.0
        assert averaged.sum() == pytest.approx(counts.n_total)

    def test_size_mismatch(self, twin_group):
        """Test the group must act on as many variables as the table has."""
        with pytest.raises(InvalidCounts):
            CellOrbitIndex.build(twin_group, 3)


class TestSymmetryModel:
    """Test the orbit-averaged estimate and its dimension."""

    def test_symmetry_mle_on_twin_data(self, twin_counts, twin_group):
        """Test the estimate is symmetric and sums to one."""
        p = symmetry_mle(twin_counts, twin_group)
        assert p.p.sum() == pytest.approx(1.0)
        assert p.probability((1, 0, 0, 0)) == pytest.approx(p.probability((0, 1, 0, 0)))
        assert p.probability((0, 0, 1, 0)) == pytest.approx(p.probability((0, 0, 0, 1)))

    def test_symmetric_counts_keep_total(self, twin_counts, twin_group):
        """Test averaged counts keep the sample size."""
        assert symmetric_counts(twin_counts, twin_group).n_total == pytest.approx(597)

    def test_dimension(self, twin_group):
        """Test the twin symmetry model has 9 free parameters."""
        assert symmetry_model_dim(twin_group, 4) == 9

    def test_trivial_group_is_saturated(self):
        """Test the identity group leaves every cell in its own orbit."""
        group = VertexPermutationGroup.identity(("a", "b", "c"))
        assert symmetry_model_dim(group, 3) == 7


class TestConnectedSetOrbits:
    """Test orbits of connected sets and the combined dimension."""

    def test_twin_four_cycle(self, twin_graph, twin_group):
        """Test the 13 connected sets of the twin graph form 8 orbits."""
        orbits = connected_set_orbits(twin_graph, twin_group)
        assert len(orbits) == 8
        assert sum(len(orbit) for orbit in orbits) == 13
        assert (0b0101, 0b1010) in orbits
        assert symmetric_independence_dim(twin_graph, twin_group) == 8

    def test_reciprocal_sum_counts_orbits(self, twin_graph, twin_group):
        """Test the sum of 1/|S(C)| is exactly the orbit count."""
        assert orbit_reciprocal_sum(twin_graph, twin_group) == Fraction(8)

    def test_identity_group(self, twin_graph):
        """Test each connected set is its own orbit under the identity."""
        group = VertexPermutationGroup.identity(twin_graph.labels)
        assert symmetric_independence_dim(twin_graph, group) == 13

    def test_graph_not_invariant(self, twin_group):
        """Test a graph the group does not preserve is refused."""
        g = BidirectedGraph(("A1", "A2", "D1", "D2"), [(0, 2)])
        with pytest.raises(GraphNotInvariant):
            connected_set_orbits(g, twin_group)


class TestCombinedFit:
    """Test fitting the intersection of graph and symmetry models."""

    def test_trivial_group_matches_plain_fit(self, twin_graph, twin_counts):
        """Test the identity group gives the ordinary fit."""
        group = VertexPermutationGroup.identity(twin_graph.labels)
        plain = icf_fit(twin_graph, twin_counts)
        combined = combined_fit(twin_graph, group, twin_counts)
        assert combined.loglik == pytest.approx(plain.loglik)
        assert combined.dim == 13

    def test_twin_combined_fit(self, twin_graph, twin_group, twin_counts):
        """Test the combined fit is symmetric, in the model and scored on observed counts."""
        fit = combined_fit(twin_graph, twin_group, twin_counts)
        assert fit.converged
        assert fit.dim == 8
        assert fit.df == 7
        assert CellOrbitIndex.build(twin_group, 4).max_asymmetry(fit.p_hat.p) <= 1e-8
        assert check_membership(fit.p_hat, twin_graph, tol=1e-9).member
        plain = icf_fit(twin_graph, twin_counts)
        assert fit.loglik <= plain.loglik + 1e-8

    def test_twin_combined_estimates_round_trip(self, twin_graph, twin_group, twin_counts):
        """Test the combined connected-set estimates rebuild the fitted cells and vice versa."""
        fit = combined_fit(twin_graph, twin_group, twin_counts)
        np.testing.assert_allclose(parametrize(fit.q_hat).p, fit.p_hat.p, atol=1e-8)
        np.testing.assert_allclose(
            extend_connected(fit.q_hat).q, mobius_forward(fit.p_hat).q, atol=1e-9
        )
        again = mobius_inverse(mobius_forward(fit.p_hat))
        np.testing.assert_allclose(again.p, fit.p_hat.p, atol=1e-12)

    def test_graph_not_invariant(self, twin_group, twin_counts):
        """Test combined fitting refuses a graph the group does not preserve."""
        g = BidirectedGraph(("A1", "A2", "D1", "D2"), [(0, 2)])
        with pytest.raises(GraphNotInvariant):
            combined_fit(g, twin_group, twin_counts)


class TestSymmetricMobius:
    """Test symmetry read off the connected-set parameters."""

    def test_combined_fit_is_symmetric(self, twin_graph, twin_group, twin_counts):
        """Test the combined estimate has orbit-constant Möbius parameters."""
        fit = combined_fit(twin_graph, twin_group, twin_counts)
        q = mobius_forward(fit.p_hat)
        assert check_symmetric_mobius(q, twin_graph, twin_group, tol=1e-8)

    def test_empirical_is_not_symmetric(self, twin_graph, twin_group, twin_counts):
        """Test the raw twin table breaks the symmetry."""
        q = mobius_forward(twin_counts.empirical())
        assert not check_symmetric_mobius(q, twin_graph, twin_group)

    def test_identity_always_symmetric(self, twin_graph, twin_counts):
        """Test every parameter vector is symmetric under the identity."""
        group = VertexPermutationGroup.identity(twin_graph.labels)
        q = mobius_forward(twin_counts.empirical())
        assert check_symmetric_mobius(q, twin_graph, group)

    def test_agrees_with_cell_symmetry(self, twin_graph, twin_group, random_member):
        """Test an asymmetric member of the graph model has asymmetric parameters."""
        p = random_member(twin_graph, seed=13)
        assert CellOrbitIndex.build(twin_group, 4).max_asymmetry(p.p) > 1e-6
        assert not check_symmetric_mobius(mobius_forward(p), twin_graph, twin_group)
