"""
Fit commands.

``fit`` fits a bi-directed graph model; ``symfit`` fits its intersection
with a permutation-symmetry model and tests it against the symmetry model.
"""

from bidi_tools.fitting.engines import fit_model
from bidi_tools.fitting.options import FitOptions
from bidi_tools.likelihood.inference import (
    chi2_upper_tail,
    deviance_test,
    saturated_dim,
    saturated_loglik,
)
from bidi_tools.likelihood.kernel import loglik
from bidi_tools.symmetry.models import (
    CellOrbitIndex,
    combined_fit,
    symmetric_independence_dim,
    symmetry_mle,
)

from ..render import Renderer
from ..report import (
    DevianceBlock,
    ProvenanceBlock,
    RunReport,
    SymmetryBlock,
    deviance_block,
    estimates_block,
    fit_block,
    model_block,
)
from .common import EXIT_FAILURE, EXIT_OK, load_inputs


def fit_command(graph: str, data: str, opts: FitOptions, renderer: Renderer) -> int:
    inputs = load_inputs(data, graph=graph)
    counts = inputs.dataset.to_counts()
    fit = fit_model(inputs.graph, counts, opts)

    report = RunReport(
        command="fit",
        model=model_block(inputs.graph),
        fit=fit_block(fit, opts),
        estimates=estimates_block(fit, counts),
        provenance=ProvenanceBlock(inputs=inputs.digests, options=opts.model_dump()),
    )
    renderer.print_report(report)
    return EXIT_OK if fit.converged else EXIT_FAILURE


def symfit_command(
    graph: str, data: str, group: str, opts: FitOptions, renderer: Renderer
) -> int:
    inputs = load_inputs(data, graph=graph, group=group)
    g, s = inputs.graph, inputs.group
    counts = inputs.dataset.to_counts()

    fit = combined_fit(g, s, counts, opts)

    index = CellOrbitIndex.build(s, counts.nvars)
    sym_dim = index.norbits - 1
    sym_loglik = loglik(symmetry_mle(counts, s), counts)
    sym_deviance = max(2.0 * (saturated_loglik(counts) - sym_loglik), 0.0)
    sym_df = saturated_dim(counts.nvars) - sym_dim
    symmetry_model = DevianceBlock(
        name="symmetry",
        dimension=sym_dim,
        deviance=sym_deviance,
        df=sym_df,
        p_value=chi2_upper_tail(sym_deviance, sym_df),
    )
    comparison = deviance_block(
        "graph+symmetry vs symmetry", fit.dim, deviance_test(fit, sym_loglik, sym_dim)
    )

    report = RunReport(
        command="symfit",
        model=model_block(g, dimension=symmetric_independence_dim(g, s)),
        fit=fit_block(fit, opts),
        estimates=estimates_block(fit),
        symmetry=SymmetryBlock(
            group=s.cycle_notation(),
            order=s.order,
            cell_orbits=index.norbits,
            connected_set_orbits=symmetric_independence_dim(g, s),
            symmetry_model=symmetry_model,
            comparison=comparison,
        ),
        provenance=ProvenanceBlock(inputs=inputs.digests, options=opts.model_dump()),
    )
    renderer.print_report(report)
    return EXIT_OK if fit.converged else EXIT_FAILURE
