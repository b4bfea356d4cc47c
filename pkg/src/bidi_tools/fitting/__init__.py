"""Maximum-likelihood engines: Iterative Conditional Fitting and BFGS on log q."""

from .engines import fit_model
from .gradient import gradient_fit
from .icf import icf_fit, icf_update
from .inner import ConditionalTheta, ConstraintMatrix, build_constraints, solve_inner
from .options import FitOptions

__all__ = [
    "ConditionalTheta",
    "ConstraintMatrix",
    "FitOptions",
    "build_constraints",
    "fit_model",
    "gradient_fit",
    "icf_fit",
    "icf_update",
    "solve_inner",
]
