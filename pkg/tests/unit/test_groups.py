"""Unit tests for vertex permutation groups and their actions on sets and cells."""

import pytest

from bidi_tools.errors import GroupTooLarge, InvalidPermutation, LabelMismatch
from bidi_tools.graph.core import BidirectedGraph
from bidi_tools.graph.groups import (
    VertexPermutationGroup,
    compose,
    from_cycles,
    inverse,
    is_invariant,
    orbit_of_set,
    permute_cell,
    permute_set,
)
from bidi_tools.mobius.transforms import cell_index, cell_pattern


class TestPermutations:
    """Test permutation helpers."""

    def test_from_cycles(self):
        """Test cycle lists become image tuples."""
        assert from_cycles([[0, 1], [2, 3]], 4) == (1, 0, 3, 2)
        assert from_cycles([[0, 1, 2]], 3) == (1, 2, 0)

    def test_repeated_vertex_rejected(self):
        """Test a vertex may appear once per generator."""
        with pytest.raises(InvalidPermutation):
            from_cycles([[0, 1], [1, 2]], 3)

    def test_compose_and_inverse(self):
        """Test a permutation composed with its inverse is the identity."""
        perm = (2, 0, 3, 1)
        assert compose(perm, inverse(perm)) == (0, 1, 2, 3)
        assert compose(inverse(perm), perm) == (0, 1, 2, 3)

    def test_permute_set(self):
        """Test sets are mapped vertex by vertex."""
        assert permute_set((1, 0, 3, 2), 0b0101) == 0b1010

    def test_permute_cell_reads_permuted_coordinates(self):
        """Test the cell action j_v = i_{perm(v)}."""
        perm = (1, 2, 0)
        cell = cell_index((1, 0, 0))
        image = cell_pattern(permute_cell(perm, cell), 3)
        assert image == (0, 0, 1)


class TestVertexPermutationGroup:
    """Test group parsing and closure."""

    def test_twin_group(self, twin_group):
        """Test the twin group swaps both pairs at once and has order 2."""
        assert twin_group.order == 2
        assert twin_group.generators == ((1, 0, 3, 2),)
        assert twin_group.cycle_notation() == ["(A1 A2)(D1 D2)"]

    def test_identity(self):
        """Test the trivial group."""
        group = VertexPermutationGroup.identity(("x", "y"))
        assert group.is_trivial()
        assert group.order == 1

    def test_symmetric_group_closure(self):
        """Test a transposition and a 4-cycle generate all 24 permutations."""
        group = VertexPermutationGroup.parse("(a b)\n(a b c d)\n", ("a", "b", "c", "d"))
        assert group.order == 24

    def test_order_cap(self):
        """Test generating more elements than allowed raises."""
        with pytest.raises(GroupTooLarge):
            VertexPermutationGroup.parse("(a b)\n(a b c d)\n", ("a", "b", "c", "d"), max_order=10)

    def test_unknown_label(self):
        """Test labels outside the dataset are rejected."""
        with pytest.raises(LabelMismatch):
            VertexPermutationGroup.parse("(a z)", ("a", "b"))

    def test_garbage_rejected(self):
        """Test text outside cycles is rejected."""
        with pytest.raises(InvalidPermutation):
            VertexPermutationGroup.parse("a b", ("a", "b"))

    def test_non_bijection_rejected(self):
        """Test explicit generators must be bijections."""
        with pytest.raises(InvalidPermutation):
            VertexPermutationGroup(("a", "b"), [(0, 0)])


class TestInvariance:
    """Test graph invariance and set orbits."""

    def test_twin_graph_is_invariant(self, twin_graph, twin_group):
        """Test the twin four-cycle is preserved by swapping the twins."""
        assert is_invariant(twin_graph, twin_group)

    def test_graph_not_invariant(self, twin_group):
        """Test a graph with only the A1-D1 edge is not preserved."""
        g = BidirectedGraph(("A1", "A2", "D1", "D2"), [(0, 2)])
        assert not is_invariant(g, twin_group)

    def test_orbit_of_set(self, twin_group):
        """Test {A1, D1} and {A2, D2} form one orbit."""
        assert orbit_of_set(twin_group, 0b0101) == frozenset({0b0101, 0b1010})
        assert orbit_of_set(twin_group, 0b0011) == frozenset({0b0011})
