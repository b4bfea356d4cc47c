"""Datasets command: list or write the embedded example files."""

import json
from pathlib import Path
from typing import Optional

from bidi_tools.data.datasets import (
    EMBEDDED_DATASETS,
    EMBEDDED_GRAPHS,
    EMBEDDED_GROUPS,
    embedded_files,
    parse_dataset,
    text_digest,
)

from ..render import Renderer
from .common import EXIT_OK


def datasets_command(out_dir: Optional[str], renderer: Renderer) -> int:
    files = embedded_files()
    if out_dir is not None:
        target = Path(out_dir).expanduser()
        target.mkdir(parents=True, exist_ok=True)
        for filename in sorted(files):
            (target / filename).write_text(files[filename], encoding="utf-8")
        renderer.print(f"Wrote {len(files)} files to {target}")

    rows = []
    kinds = (("data", EMBEDDED_DATASETS), ("graph", EMBEDDED_GRAPHS), ("group", EMBEDDED_GROUPS))
    for kind, table in kinds:
        for name, filename in sorted(table.items()):
            text = files[filename]
            row = {"reference": f"builtin:{name}", "kind": kind, "file": filename}
            if kind == "data":
                row["n_total"] = parse_dataset(text).n_total
            row["digest"] = text_digest(text)
            rows.append(row)

    if renderer.table_output:
        renderer.print_table(
            [{k: row.get(k, "") for k in ("reference", "kind", "file", "n_total")} for row in rows],
            title="Embedded files",
        )
    else:
        renderer.print_json(json.dumps(rows, sort_keys=True, indent=2))
    return EXIT_OK
