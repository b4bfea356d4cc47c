"""Input loading, option building and error mapping shared by the commands."""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from pydantic import ValidationError

from bidi_tools.data.datasets import Dataset, parse_dataset, read_source, text_digest
from bidi_tools.errors import BidiError, ErrorCategory, InvalidOption
from bidi_tools.fitting.options import FitOptions
from bidi_tools.graph.core import BidirectedGraph
from bidi_tools.graph.groups import VertexPermutationGroup

from ..render import Renderer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_FAILURE = 2


@dataclass
class Inputs:
    """Parsed command inputs and the digests of their source text."""

    dataset: Dataset
    digests: Dict[str, str]
    graph: Optional[BidirectedGraph] = None
    group: Optional[VertexPermutationGroup] = None


def load_inputs(
    data: str, graph: Optional[str] = None, group: Optional[str] = None
) -> Inputs:
    data_text = read_source(data, "data")
    dataset = parse_dataset(data_text)
    inputs = Inputs(dataset=dataset, digests={"data": text_digest(data_text)})
    if graph is not None:
        graph_text = read_source(graph, "graph")
        inputs.graph = BidirectedGraph.parse(graph_text, dataset.labels)
        inputs.digests["graph"] = text_digest(graph_text)
    if group is not None:
        group_text = read_source(group, "group")
        inputs.group = VertexPermutationGroup.parse(group_text, dataset.labels)
        inputs.digests["group"] = text_digest(group_text)
    logger.debug(f"Loaded inputs: {sorted(inputs.digests)}")
    return inputs


def build_options(**flags) -> FitOptions:
    """FitOptions from settings with command-line overrides."""
    try:
        return FitOptions.from_settings(**flags)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        raise InvalidOption(f"Invalid fit options: {problems}") from None


def exit_code_for(error: BidiError) -> int:
    if error.category == ErrorCategory.INPUT_ERROR:
        return EXIT_INPUT_ERROR
    return EXIT_FAILURE


def guarded(renderer: Renderer, action: Callable[[], int]) -> int:
    """Run a command body, rendering library errors and mapping them to exit codes."""
    try:
        return action()
    except BidiError as exc:
        renderer.print_error(exc.to_dict())
        return exit_code_for(exc)
