"""
bidi-tools - Binary bi-directed graph models for contingency tables.

This package provides:
- Connected-set enumeration and the Möbius parametrization
- Maximum-likelihood fitting by Iterative Conditional Fitting
- Likelihood-ratio tests and backward stepwise edge selection
- Permutation-symmetry models combined with graph models
"""

__version__ = "0.1.0"

from .errors import BidiError, ErrorCategory
from .fitting import FitOptions, fit_model, gradient_fit, icf_fit
from .graph import BidirectedGraph, VertexPermutationGroup, enumerate_connected_sets
from .likelihood import CountTable, FitResult, deviance_test
from .mobius import CellDistribution, check_membership, mobius_forward, mobius_inverse
from .select import backward_stepwise
from .symmetry import combined_fit, symmetry_mle

__all__ = [
    "BidiError",
    "BidirectedGraph",
    "CellDistribution",
    "CountTable",
    "ErrorCategory",
    "FitOptions",
    "FitResult",
    "VertexPermutationGroup",
    "backward_stepwise",
    "check_membership",
    "combined_fit",
    "deviance_test",
    "enumerate_connected_sets",
    "fit_model",
    "gradient_fit",
    "icf_fit",
    "mobius_forward",
    "mobius_inverse",
    "symmetry_mle",
]
