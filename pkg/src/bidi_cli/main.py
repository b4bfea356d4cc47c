"""
Main CLI application for bidi-tools.

Provides the Typer application with global flags and command routing.
Exit codes: 0 success, 1 input error, 2 non-convergence or numerical failure.
"""

import logging
import sys
from typing import Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from typing_extensions import Annotated

from bidi_tools.config import get_settings

from . import __version__
from .commands.common import EXIT_INPUT_ERROR, build_options, guarded
from .commands.datasets import datasets_command
from .commands.fit import fit_command, symfit_command
from .commands.membership import check_command, mobius_command
from .commands.stepwise import stepwise_command
from .render import Renderer

app = typer.Typer(
    name="bidi",
    help="bidi - fit binary bi-directed graph models to contingency tables",
    no_args_is_help=True,
    add_completion=False,
)

_renderer: Optional[Renderer] = None

GraphOpt = Annotated[
    str, typer.Option("--graph", "-g", help="Edge-list file or builtin:NAME (twin4cycle, trust)")
]
DataOpt = Annotated[
    str, typer.Option("--data", "-d", help="Dataset CSV file or builtin:NAME (twin, trust)")
]
TolOpt = Annotated[
    Optional[float], typer.Option("--tol", help="Outer convergence tolerance [default: 1e-8]")
]
MaxIterOpt = Annotated[
    Optional[int], typer.Option("--max-iter", help="Maximum fitting cycles [default: 500]")
]
AlgorithmOpt = Annotated[
    Optional[str], typer.Option("--algorithm", help="Fitting engine: icf or gradient")
]
InnerOpt = Annotated[
    Optional[str], typer.Option("--inner", help="Inner ICF solver: newton or gp")
]
PseudoCountOpt = Annotated[
    Optional[float], typer.Option("--pseudo-count", help="Add this count to every cell")
]
MultiStartOpt = Annotated[
    Optional[int], typer.Option("--multi-start", help="Number of starting points [default: 1]")
]
SeedOpt = Annotated[
    Optional[int], typer.Option("--seed", help="Seed for random starts [default: 0]")
]


def get_renderer() -> Renderer:
    """Get global renderer instance."""
    if _renderer is None:
        raise RuntimeError("Renderer not initialized")
    return _renderer


def configure_logging(level: str) -> None:
    """Route library logging to stderr through rich."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(name)s: %(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_time=False, show_path=False)],
        force=True,
    )


def version_callback(value: bool) -> None:
    if value:
        typer.echo(f"bidi {__version__}")
        raise typer.Exit(0)


@app.callback()
def main(
    output_format: Annotated[
        str, typer.Option("--format", "-f", help="Output format: json or table")
    ] = "json",
    log_level: Annotated[
        Optional[str], typer.Option("--log-level", help="Logging level [default: from settings]")
    ] = None,
    quiet: Annotated[
        bool, typer.Option("--quiet", "-q", help="Only log errors")
    ] = False,
    version: Annotated[
        Optional[bool],
        typer.Option("--version", callback=version_callback, is_eager=True, help="Show version"),
    ] = None,
):
    """
    bidi - binary bi-directed graph models.

    Examples:
      bidi fit --graph builtin:twin4cycle --data builtin:twin

      bidi symfit --graph builtin:twin4cycle --data builtin:twin --group builtin:twin

      bidi stepwise --data builtin:trust --alpha 0.05

      bidi --format table check --graph graph.g --data table.csv
    """
    global _renderer

    if output_format not in ("json", "table"):
        typer.echo(f"Unknown format {output_format!r}; use json or table", err=True)
        raise typer.Exit(EXIT_INPUT_ERROR)

    level = "ERROR" if quiet else (log_level or get_settings().log_level)
    configure_logging(level)
    _renderer = Renderer(table_output=output_format == "table", quiet=quiet)


@app.command()
def fit(
    graph: GraphOpt,
    data: DataOpt,
    tol: TolOpt = None,
    max_iter: MaxIterOpt = None,
    algorithm: AlgorithmOpt = None,
    inner: InnerOpt = None,
    pseudo_count: PseudoCountOpt = None,
    multi_start: MultiStartOpt = None,
    seed: SeedOpt = None,
):
    """Fit a bi-directed graph model and report deviance against the saturated model."""
    renderer = get_renderer()
    exit_code = guarded(
        renderer,
        lambda: fit_command(
            graph=graph,
            data=data,
            opts=build_options(
                algorithm=algorithm,
                tol_outer=tol,
                max_cycles=max_iter,
                inner_method=inner,
                pseudo_count=pseudo_count,
                multi_start=multi_start,
                seed=seed,
            ),
            renderer=renderer,
        ),
    )
    raise typer.Exit(exit_code)


@app.command()
def symfit(
    graph: GraphOpt,
    data: DataOpt,
    group: Annotated[
        str, typer.Option("--group", help="Cycle-notation generators file or builtin:twin")
    ],
    tol: TolOpt = None,
    max_iter: MaxIterOpt = None,
    algorithm: AlgorithmOpt = None,
    inner: InnerOpt = None,
    pseudo_count: PseudoCountOpt = None,
    multi_start: MultiStartOpt = None,
    seed: SeedOpt = None,
):
    """Fit a graph model under permutation symmetry and test it against the symmetry model."""
    renderer = get_renderer()
    exit_code = guarded(
        renderer,
        lambda: symfit_command(
            graph=graph,
            data=data,
            group=group,
            opts=build_options(
                algorithm=algorithm,
                tol_outer=tol,
                max_cycles=max_iter,
                inner_method=inner,
                pseudo_count=pseudo_count,
                multi_start=multi_start,
                seed=seed,
            ),
            renderer=renderer,
        ),
    )
    raise typer.Exit(exit_code)


@app.command()
def stepwise(
    data: DataOpt,
    alpha: Annotated[float, typer.Option("--alpha", help="Significance level")] = 0.05,
    tol: TolOpt = None,
    max_iter: MaxIterOpt = None,
    algorithm: AlgorithmOpt = None,
    inner: InnerOpt = None,
    pseudo_count: PseudoCountOpt = None,
    multi_start: MultiStartOpt = None,
    seed: SeedOpt = None,
):
    """Backward stepwise edge selection starting from the complete graph."""
    renderer = get_renderer()
    exit_code = guarded(
        renderer,
        lambda: stepwise_command(
            data=data,
            alpha=alpha,
            opts=build_options(
                algorithm=algorithm,
                tol_outer=tol,
                max_cycles=max_iter,
                inner_method=inner,
                pseudo_count=pseudo_count,
                multi_start=multi_start,
                seed=seed,
            ),
            renderer=renderer,
        ),
    )
    raise typer.Exit(exit_code)


@app.command()
def mobius(data: DataOpt):
    """Print the Möbius parameters and dependence ratios of the empirical distribution."""
    renderer = get_renderer()
    raise typer.Exit(guarded(renderer, lambda: mobius_command(data=data, renderer=renderer)))


@app.command()
def check(
    graph: GraphOpt,
    data: DataOpt,
    tol: Annotated[float, typer.Option("--tol", help="Residual tolerance")] = 1e-10,
):
    """Check whether the empirical distribution lies in the model of a graph."""
    renderer = get_renderer()
    raise typer.Exit(
        guarded(
            renderer, lambda: check_command(graph=graph, data=data, tol=tol, renderer=renderer)
        )
    )


@app.command()
def datasets(
    out_dir: Annotated[
        Optional[str], typer.Option("--out-dir", help="Write the embedded files here")
    ] = None,
):
    """List the embedded datasets, graphs and groups, or write them to a directory."""
    renderer = get_renderer()
    raise typer.Exit(
        guarded(renderer, lambda: datasets_command(out_dir=out_dir, renderer=renderer))
    )


def cli_main():
    """Entry point for console script."""
    try:
        app()
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    cli_main()
