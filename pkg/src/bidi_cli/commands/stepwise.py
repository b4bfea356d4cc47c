"""Stepwise command implementation."""

from bidi_tools.fitting.options import FitOptions
from bidi_tools.select.stepwise import backward_stepwise

from ..render import Renderer
from ..report import (
    ProvenanceBlock,
    RunReport,
    StepBlock,
    StepwiseBlock,
    estimates_block,
    fit_block,
    model_block,
)
from .common import EXIT_FAILURE, EXIT_OK, load_inputs


def stepwise_command(data: str, alpha: float, opts: FitOptions, renderer: Renderer) -> int:
    inputs = load_inputs(data)
    counts = inputs.dataset.to_counts()
    trace = backward_stepwise(counts, alpha=alpha, opts=opts)

    steps = [
        StepBlock(
            edge=step.edge,
            deviance=step.deviance,
            df=step.df,
            p_value=step.p_value,
            dimension=step.dim,
        )
        for step in trace.steps
    ]
    report = RunReport(
        command="stepwise",
        model=model_block(trace.graph),
        fit=fit_block(trace.fit, opts),
        estimates=estimates_block(trace.fit, counts),
        stepwise=StepwiseBlock(
            alpha=alpha,
            initial_dimension=trace.initial.dim,
            total_deviance=trace.total_deviance,
            steps=steps,
        ),
        provenance=ProvenanceBlock(
            inputs=inputs.digests, options={**opts.model_dump(), "alpha": alpha}
        ),
    )
    renderer.print_report(report)
    return EXIT_OK if trace.fit.converged else EXIT_FAILURE
