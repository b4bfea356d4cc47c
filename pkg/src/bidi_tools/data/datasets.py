"""
Dataset text format and the embedded example files.

A dataset is CSV with a header of variable labels followed by ``n``; each
row gives a 0/1 pattern and its count. Cells that are not listed have count
zero. Serialization lists every cell, first label varying slowest.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

from ..errors import BadCount, BadHeader, BadRow, DuplicateCell, LabelMismatch, NonBinaryValue
from ..likelihood.kernel import CountTable
from ..mobius.transforms import cell_index

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"

EMBEDDED_DATASETS: Dict[str, str] = {"twin": "twin.csv", "trust": "trust.csv"}
EMBEDDED_GRAPHS: Dict[str, str] = {"twin4cycle": "twin4cycle.g", "trust": "trust.g"}
EMBEDDED_GROUPS: Dict[str, str] = {"twin": "twin.grp"}

_KINDS = {"data": EMBEDDED_DATASETS, "graph": EMBEDDED_GRAPHS, "group": EMBEDDED_GROUPS}


@dataclass(frozen=True, eq=False)
class Dataset:
    """Variable labels and one count per cell (cell index bit v is variable v)."""

    labels: Tuple[str, ...]
    counts: np.ndarray = field(repr=False)

    @property
    def n_total(self) -> float:
        return float(self.counts.sum())

    def to_counts(self) -> CountTable:
        return CountTable(self.labels, self.counts)


def _parse_count(raw: str, lineno: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise BadCount(f"Line {lineno}: count {raw!r} is not a number") from None
    if not math.isfinite(value) or value < 0:
        raise BadCount(f"Line {lineno}: count {raw!r} must be finite and nonnegative")
    if not value.is_integer():
        raise BadCount(f"Line {lineno}: count {raw!r} is not a whole number")
    return value


def parse_dataset(text: str) -> Dataset:
    """Parse dataset CSV text.

    Raises:
        BadHeader: Missing header, missing ``n`` column or repeated labels
        BadRow: Wrong number of fields
        NonBinaryValue: A pattern entry other than 0 or 1
        DuplicateCell: The same pattern listed twice
        BadCount: Negative, fractional or non-numeric count
    """
    rows = [row for row in csv.reader(io.StringIO(text))]
    numbered = [(i, row) for i, row in enumerate(rows, start=1) if any(x.strip() for x in row)]
    if not numbered:
        raise BadHeader("Dataset is empty")

    _, header = numbered[0]
    header = [h.strip() for h in header]
    if len(header) < 2 or header[-1] != "n":
        raise BadHeader(f"Header must list variable labels followed by 'n', got {header}")
    labels = tuple(header[:-1])
    if any(not label for label in labels) or len(set(labels)) != len(labels):
        raise BadHeader(f"Variable labels must be nonempty and distinct: {list(labels)}")

    nvars = len(labels)
    counts = np.zeros(1 << nvars)
    seen = set()
    for lineno, row in numbered[1:]:
        fields = [x.strip() for x in row]
        if len(fields) != nvars + 1:
            raise BadRow(f"Line {lineno}: expected {nvars + 1} fields, got {len(fields)}")
        pattern = []
        for value in fields[:-1]:
            if value not in ("0", "1"):
                raise NonBinaryValue(lineno, value)
            pattern.append(int(value))
        cell = cell_index(pattern)
        if cell in seen:
            raise DuplicateCell(lineno, "".join(fields[:-1]))
        seen.add(cell)
        counts[cell] = _parse_count(fields[-1], lineno)

    logger.debug(f"Parsed dataset: {nvars} variables, {len(seen)} listed cells")
    return Dataset(labels=labels, counts=counts)


def _format_count(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def serialize_dataset(dataset: Dataset) -> str:
    """Canonical text: every cell listed, first label varying slowest."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(dataset.labels) + ["n"])
    for pattern in itertools.product((0, 1), repeat=len(dataset.labels)):
        writer.writerow(list(pattern) + [_format_count(dataset.counts[cell_index(pattern)])])
    return buf.getvalue()


def embedded_names(kind: str) -> List[str]:
    return sorted(_KINDS[kind])


def load_embedded_text(kind: str, name: str) -> str:
    """Text of an embedded file, e.g. ``("data", "twin")``."""
    table = _KINDS[kind]
    if name not in table:
        raise LabelMismatch(f"No embedded {kind} named {name!r}; choose from {sorted(table)}")
    return resources.files("bidi_tools.data").joinpath("embedded", table[name]).read_text("utf-8")


def embedded_files() -> Dict[str, str]:
    """Every embedded file name mapped to its text."""
    out = {}
    for kind, table in _KINDS.items():
        for name, filename in table.items():
            out[filename] = load_embedded_text(kind, name)
    return out


def read_source(source: str, kind: str) -> str:
    """Text of a ``builtin:NAME`` reference or a file path."""
    if source.startswith(BUILTIN_PREFIX):
        return load_embedded_text(kind, source[len(BUILTIN_PREFIX):])
    path = Path(source).expanduser()
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BadHeader(f"Cannot read {kind} file {source}: {exc.strerror}") from exc


def load_dataset(source: str) -> Dataset:
    return parse_dataset(read_source(source, "data"))


def text_digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()
