"""Dataset CSV format and the embedded twin and trust files."""

from .datasets import (
    Dataset,
    load_dataset,
    load_embedded_text,
    parse_dataset,
    read_source,
    serialize_dataset,
    text_digest,
)

__all__ = [
    "Dataset",
    "load_dataset",
    "load_embedded_text",
    "parse_dataset",
    "read_source",
    "serialize_dataset",
    "text_digest",
]
