"""Unit tests for backward stepwise edge selection."""

import pytest

from bidi_tools.errors import InvalidOption
from bidi_tools.likelihood.kernel import CountTable
from bidi_tools.select.stepwise import backward_stepwise


@pytest.fixture
def linked_pair_counts():
    """a and b agree far more often than chance; c is independent of both."""
    return CountTable(("a", "b", "c"), [100, 5, 5, 100, 100, 5, 5, 100])


class TestBackwardStepwise:
    """Test greedy edge removal."""

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5])
    def test_alpha_out_of_range(self, alpha, linked_pair_counts):
        """Test alpha must lie strictly between 0 and 1."""
        with pytest.raises(InvalidOption):
            backward_stepwise(linked_pair_counts, alpha=alpha)

    def test_keeps_only_the_dependent_edge(self, linked_pair_counts):
        """Test edges to the independent variable go and the a-b edge stays."""
        trace = backward_stepwise(linked_pair_counts, alpha=0.05)
        assert trace.graph.edges == [(0, 1)]
        assert sorted(step.edge for step in trace.steps) == ["a<->c", "b<->c"]
        assert all(step.p_value > 0.05 for step in trace.steps)

    def test_independent_table_loses_every_edge(self, independent_counts):
        """Test an exactly factoring table ends at the empty graph."""
        trace = backward_stepwise(independent_counts, alpha=0.05)
        assert trace.graph.edges == []
        assert len(trace.steps) == 3
        assert trace.fit.dim == 3

    def test_deviances_telescope(self, linked_pair_counts):
        """Test step deviances add up to the final deviance against the saturated start."""
        trace = backward_stepwise(linked_pair_counts, alpha=0.05)
        assert trace.initial.deviance == pytest.approx(0.0, abs=1e-8)
        assert trace.total_deviance == pytest.approx(trace.fit.deviance, abs=1e-6)

    def test_dimensions_decrease(self, linked_pair_counts):
        """Test every removal drops at least one parameter."""
        trace = backward_stepwise(linked_pair_counts, alpha=0.05)
        dims = [trace.initial.dim] + [step.dim for step in trace.steps]
        assert all(later < earlier for earlier, later in zip(dims, dims[1:]))
        assert all(step.df >= 1 for step in trace.steps)

    def test_worker_count_does_not_change_result(self, linked_pair_counts):
        """Test serial and threaded candidate fits choose the same path."""
        serial = backward_stepwise(linked_pair_counts, alpha=0.05, max_workers=1)
        threaded = backward_stepwise(linked_pair_counts, alpha=0.05, max_workers=4)
        assert [s.edge for s in serial.steps] == [s.edge for s in threaded.steps]
        assert serial.fit.loglik == pytest.approx(threaded.fit.loglik)

    def test_strict_alpha_keeps_complete_graph(self):
        """Test nothing is removed when every edge is strongly needed."""
        counts = CountTable(("a", "b"), [200, 5, 5, 200])
        trace = backward_stepwise(counts, alpha=0.05)
        assert trace.steps == []
        assert trace.graph.edges == [(0, 1)]
