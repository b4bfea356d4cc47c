"""Engine selection by ``FitOptions.algorithm``."""

from typing import Optional

from ..graph.core import BidirectedGraph
from ..likelihood.inference import FitResult
from ..likelihood.kernel import CountTable
from .gradient import gradient_fit
from .icf import icf_fit
from .options import FitOptions


def fit_model(g: BidirectedGraph, n: CountTable, opts: Optional[FitOptions] = None) -> FitResult:
    """Fit ``g`` to ``n`` with the engine named in ``opts``."""
    opts = opts or FitOptions.from_settings()
    if opts.algorithm == "gradient":
        return gradient_fit(g, n, opts)
    return icf_fit(g, n, opts)
