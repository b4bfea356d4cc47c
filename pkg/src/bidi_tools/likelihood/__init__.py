"""Multinomial likelihood, its derivatives and likelihood-ratio inference."""

from .inference import (
    DevianceTest,
    FitResult,
    chi2_upper_tail,
    deviance_test,
    pairwise_odds_ratios,
    saturated_dim,
    saturated_loglik,
)
from .kernel import (
    CountTable,
    cell_jacobian,
    expected_information,
    hessian,
    loglik,
    marginal_prob,
    observed_information,
    score,
    standard_errors,
)

__all__ = [
    "CountTable",
    "DevianceTest",
    "FitResult",
    "cell_jacobian",
    "chi2_upper_tail",
    "deviance_test",
    "expected_information",
    "hessian",
    "loglik",
    "marginal_prob",
    "observed_information",
    "pairwise_odds_ratios",
    "saturated_dim",
    "saturated_loglik",
    "score",
    "standard_errors",
]
