"""
Inspection commands.

``mobius`` prints the Möbius parameters of the empirical distribution;
``check`` reports whether it satisfies the constraints of a graph model.
"""

from bidi_tools.errors import ZeroMarginal
from bidi_tools.graph.core import BidirectedGraph
from bidi_tools.mobius.transforms import check_membership, dependence_ratios, mobius_forward

from ..render import Renderer
from ..report import (
    EstimatesBlock,
    ProvenanceBlock,
    RunReport,
    cells_of,
    membership_block,
    mobius_of,
    model_block,
)
from .common import EXIT_OK, load_inputs


def mobius_command(data: str, renderer: Renderer) -> int:
    inputs = load_inputs(data)
    p = inputs.dataset.to_counts().empirical()
    q = mobius_forward(p)
    # the complete graph only supplies set names here
    names = BidirectedGraph.complete(p.labels)
    try:
        tau = dependence_ratios(q)
        ratios = {names.format_set(a): tau[a] for a, _ in tau.items()}
    except ZeroMarginal:
        ratios = {}

    report = RunReport(
        command="mobius",
        estimates=EstimatesBlock(
            cells=cells_of(p), mobius=mobius_of(q, names), dependence_ratios=ratios
        ),
        provenance=ProvenanceBlock(inputs=inputs.digests),
    )
    renderer.print_report(report)
    return EXIT_OK


def check_command(graph: str, data: str, tol: float, renderer: Renderer) -> int:
    inputs = load_inputs(data, graph=graph)
    p = inputs.dataset.to_counts().empirical()
    membership = check_membership(p, inputs.graph, tol=tol)

    report = RunReport(
        command="check",
        model=model_block(inputs.graph),
        membership=membership_block(membership, inputs.graph),
        provenance=ProvenanceBlock(inputs=inputs.digests, options={"tol": tol}),
    )
    renderer.print_report(report)
    return EXIT_OK
