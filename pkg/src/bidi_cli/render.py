"""
Output rendering for the bidi CLI.

JSON mode writes the deterministic report to stdout. Table mode renders a
rich summary for people. Errors always go to stderr.
"""

import json
import sys
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.table import Table

from .report import RunReport


class Renderer:
    """Output renderer with support for human and machine formats."""

    def __init__(self, table_output: bool = False, quiet: bool = False):
        self.table_output = table_output
        self.quiet = quiet
        self.console = Console(highlight=False)
        self.err_console = Console(stderr=True, highlight=False)

    def print(self, message: str) -> None:
        if self.quiet:
            return
        if self.table_output:
            self.console.print(message)
        else:
            self.err_console.print(message)

    def print_json(self, text: str) -> None:
        """Write pre-serialized JSON verbatim so reports stay byte-identical."""
        sys.stdout.write(text)
        sys.stdout.write("\n")
        sys.stdout.flush()

    def print_table(
        self, rows: List[Dict[str, Any]], title: Optional[str] = None
    ) -> None:
        if not rows:
            self.console.print(f"{title}: none" if title else "No data to display")
            return
        table = Table(title=title)
        for key in rows[0].keys():
            table.add_column(key.replace("_", " ").title())
        for row in rows:
            table.add_row(*[_cell(v) for v in row.values()])
        self.console.print(table)

    def print_error(self, payload: Dict[str, Any]) -> None:
        if self.table_output:
            self.err_console.print(f"Error: {payload['message']}", style="red")
        else:
            self.err_console.print_json(json.dumps(payload, sort_keys=True))

    def print_report(self, report: RunReport) -> None:
        if not self.table_output:
            self.print_json(report.to_json())
            return

        if report.model is not None:
            model = report.model
            self.print_table(
                [
                    {"field": "vertices", "value": " ".join(model.vertices)},
                    {"field": "edges", "value": ", ".join(model.edges) or "-"},
                    {"field": "dimension", "value": model.dimension},
                    {"field": "complete sets", "value": model.complete_sets},
                    {"field": "df vs saturated", "value": model.df},
                ],
                title="Model",
            )
        if report.fit is not None:
            fit = report.fit
            self.print_table(
                [
                    {"field": "algorithm", "value": fit.algorithm},
                    {"field": "loglik", "value": fit.loglik},
                    {"field": "deviance", "value": fit.deviance},
                    {"field": "df", "value": fit.df},
                    {"field": "p-value", "value": fit.p_value},
                    {"field": "iterations", "value": fit.iterations},
                    {"field": "converged", "value": fit.converged},
                    {"field": "score norm", "value": fit.score_norm},
                ],
                title="Fit",
            )
        if report.symmetry is not None:
            sym = report.symmetry
            self.print_table(
                [test.model_dump() for test in (sym.symmetry_model, sym.comparison)],
                title=f"Symmetry ({' '.join(sym.group) or 'identity'}, order {sym.order})",
            )
        if report.stepwise is not None:
            self.print_table(
                [step.model_dump() for step in report.stepwise.steps],
                title=f"Stepwise removals (alpha={report.stepwise.alpha})",
            )
        if report.membership is not None:
            member = report.membership
            self.print_table(
                [{"set": v.set, "residual": v.residual} for v in member.violators],
                title=f"Membership: {'yes' if member.member else 'no'} "
                f"(max residual {_cell(member.max_residual)})",
            )
        if report.estimates is not None:
            se = report.estimates.standard_errors
            self.print_table(
                [
                    {"set": k, "q": v, "se": se.get(k, "")}
                    for k, v in report.estimates.mobius.items()
                ],
                title="Möbius parameters",
            )


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
