"""Exception hierarchy for bidi-tools.

Every error carries a stable ``code`` and an :class:`ErrorCategory` so the
CLI can map failures to exit codes and machine-readable error payloads.
"""

from enum import Enum
from typing import Any, Dict


class ErrorCategory(str, Enum):
    """Error categorization used for exit-code mapping."""

    INPUT_ERROR = "input_error"  # Malformed files, bad labels, invalid options
    MODEL_ERROR = "model_error"  # Valid input that the model cannot accommodate
    NUMERICAL_ERROR = "numerical_error"  # Iterations failed or left the simplex


class BidiError(Exception):
    """Base class for all library errors."""

    code: str = "bidi_error"
    category: ErrorCategory = ErrorCategory.INPUT_ERROR

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """Serializable error payload."""
        return {
            "error_code": self.code,
            "category": self.category.value,
            "message": self.message,
        }


# ---------------------------------------------------------------------------
# Input errors
# ---------------------------------------------------------------------------


class VertexOutOfRange(BidiError):
    code = "vertex_out_of_range"

    def __init__(self, vertex: Any, nvars: int):
        super().__init__(
            f"Vertex {vertex!r} is not in a graph with {nvars} vertices", vertex=vertex
        )


class VertexLimitExceeded(BidiError):
    code = "vertex_limit_exceeded"

    def __init__(self, nvars: int, limit: int):
        super().__init__(f"{nvars} vertices exceeds the configured limit of {limit}")


class EmptyVertexSet(BidiError):
    code = "empty_vertex_set"

    def __init__(self, what: str = "operation"):
        super().__init__(f"{what} requires a nonempty vertex set")


class InvalidGraph(BidiError):
    code = "invalid_graph"


class InvalidPermutation(BidiError):
    code = "invalid_permutation"


class GroupTooLarge(BidiError):
    code = "group_too_large"

    def __init__(self, limit: int):
        super().__init__(f"Generated group has more than {limit} elements")


class LabelMismatch(BidiError):
    code = "label_mismatch"


class BadHeader(BidiError):
    code = "bad_header"


class BadRow(BidiError):
    code = "bad_row"


class NonBinaryValue(BidiError):
    code = "non_binary_value"

    def __init__(self, line: int, value: str):
        super().__init__(f"Line {line}: expected 0 or 1, got {value!r}")


class DuplicateCell(BidiError):
    code = "duplicate_cell"

    def __init__(self, line: int, pattern: str):
        super().__init__(f"Line {line}: cell {pattern} already listed")


class BadCount(BidiError):
    code = "bad_count"


class InvalidDistribution(BidiError):
    code = "invalid_distribution"


class InvalidCounts(BidiError):
    code = "invalid_counts"


class ZeroCountsRejected(BidiError):
    code = "zero_counts_rejected"

    def __init__(self, nzero: int):
        super().__init__(
            f"{nzero} cells have zero counts; supply a pseudo count to fit this table"
        )


class GraphNotInvariant(BidiError):
    code = "graph_not_invariant"

    def __init__(self):
        super().__init__("Graph is not invariant under the permutation group")


class NotInModel(BidiError):
    code = "not_in_model"

    def __init__(self, max_residual: float):
        super().__init__(
            f"Starting distribution is not in the model (max residual {max_residual:.3e})",
            max_residual=max_residual,
        )


class InvalidModelComparison(BidiError):
    code = "invalid_model_comparison"


class InvalidOption(BidiError):
    code = "invalid_option"


# ---------------------------------------------------------------------------
# Model and numerical errors
# ---------------------------------------------------------------------------


class OutsideSimplex(BidiError):
    code = "outside_simplex"
    category = ErrorCategory.MODEL_ERROR

    def __init__(self, cell: int, value: float):
        super().__init__(f"Cell {cell} has probability {value:.3e} below zero", cell=cell)
        self.cell = cell
        self.value = value


class LogOfZero(BidiError):
    code = "log_of_zero"
    category = ErrorCategory.NUMERICAL_ERROR

    def __init__(self, cell: int):
        super().__init__(f"Cell {cell} has zero probability but positive count", cell=cell)
        self.cell = cell


class ZeroMarginal(BidiError):
    code = "zero_marginal"
    category = ErrorCategory.MODEL_ERROR

    def __init__(self, vertex: int):
        super().__init__(f"Marginal P(X_{vertex} = 0) is zero", vertex=vertex)


class DegenerateMargin(BidiError):
    code = "degenerate_margin"
    category = ErrorCategory.MODEL_ERROR

    def __init__(self, v: int, w: int):
        super().__init__(f"Two-way margin of vertices {v} and {w} has an empty cell")


class ZeroConditioningEvent(BidiError):
    code = "zero_conditioning_event"
    category = ErrorCategory.NUMERICAL_ERROR

    def __init__(self, mask: int):
        super().__init__(f"Conditioning event on set {mask:#x} has probability zero", mask=mask)


class InnerNoConvergence(BidiError):
    code = "inner_no_convergence"
    category = ErrorCategory.NUMERICAL_ERROR

    def __init__(self, vertex: int, iterations: int):
        super().__init__(
            f"Conditional update for vertex {vertex} did not converge in {iterations} iterations"
        )
        self.vertex = vertex


class NoConvergence(BidiError):
    code = "no_convergence"
    category = ErrorCategory.NUMERICAL_ERROR

    def __init__(self, max_cycles: int):
        super().__init__(f"Fit did not converge within {max_cycles} cycles")


class NegativeDeviance(BidiError):
    code = "negative_deviance"
    category = ErrorCategory.NUMERICAL_ERROR

    def __init__(self, value: float):
        super().__init__(f"Deviance {value:.3e} is negative; the fit has not converged")


class SingularInformation(BidiError):
    code = "singular_information"
    category = ErrorCategory.NUMERICAL_ERROR

    def __init__(self, message: str = "Information matrix is not positive definite"):
        super().__init__(message)


class SymmetryViolatedAtOptimum(BidiError):
    code = "symmetry_violated_at_optimum"
    category = ErrorCategory.NUMERICAL_ERROR

    def __init__(self, max_deviation: float):
        super().__init__(
            f"Fitted distribution deviates from symmetry by {max_deviation:.3e}",
            max_deviation=max_deviation,
        )

