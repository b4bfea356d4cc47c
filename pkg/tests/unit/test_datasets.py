"""Unit tests for dataset parsing, serialization and embedded tables."""

import pytest

from bidi_tools.data.datasets import (
    embedded_files,
    embedded_names,
    load_dataset,
    load_embedded_text,
    parse_dataset,
    read_source,
    serialize_dataset,
    text_digest,
)
from bidi_tools.errors import (
    BadCount,
    BadHeader,
    BadRow,
    DuplicateCell,
    LabelMismatch,
    NonBinaryValue,
)
from bidi_tools.mobius.transforms import cell_index


class TestEmbeddedData:
    """Test the bundled tables."""

    def test_twin_total(self):
        """Test the twin table holds 597 pairs."""
        data = load_dataset("builtin:twin")
        assert data.labels == ("A1", "A2", "D1", "D2")
        assert data.n_total == 597
        assert data.counts[0] == 288

    def test_trust_total(self):
        """Test the trust table holds 13486 respondents over 7 variables."""
        data = load_dataset("builtin:trust")
        assert len(data.labels) == 7
        assert data.n_total == 13486

    def test_names(self):
        """Test each kind lists its embedded names."""
        assert embedded_names("data") == ["trust", "twin"]
        assert embedded_names("graph") == ["trust", "twin4cycle"]
        assert embedded_names("group") == ["twin"]

    def test_unknown_name(self):
        """Test asking for a missing table raises."""
        with pytest.raises(LabelMismatch):
            load_embedded_text("data", "nope")

    def test_embedded_files(self):
        """Test every bundled file is exported by name."""
        files = embedded_files()
        assert set(files) == {"twin.csv", "trust.csv", "twin4cycle.g", "trust.g", "twin.grp"}

    @pytest.mark.parametrize("name", ["twin", "trust"])
    def test_serialization_is_canonical(self, name):
        """Test parsing then serializing reproduces the bundled bytes."""
        text = load_embedded_text("data", name)
        assert serialize_dataset(parse_dataset(text)) == text


class TestParseDataset:
    """Test CSV parsing and its failure modes."""

    def test_missing_cells_are_zero(self):
        """Test unlisted patterns count zero."""
        data = parse_dataset("x,y,n\n1,0,4\n\n0,1,2\n")
        assert data.counts[cell_index((1, 0))] == 4
        assert data.counts[cell_index((0, 1))] == 2
        assert data.counts[0] == 0
        assert data.n_total == 6

    def test_fractional_counts_rejected(self):
        """Test counts must be whole numbers; smoothing belongs to --pseudo-count."""
        with pytest.raises(BadCount, match="Line 2: .*whole number"):
            parse_dataset("x,n\n0,1.5\n1,2\n")

    def test_integral_decimal_counts_accepted(self):
        """Test a count written as 4.0 parses and serializes as 4."""
        assert serialize_dataset(parse_dataset("x,n\n0,4.0\n1,2\n")) == "x,n\n0,4\n1,2\n"

    @pytest.mark.parametrize(
        "text,error",
        [
            ("", BadHeader),
            ("x,y\n0,1\n", BadHeader),
            ("x,x,n\n0,1,3\n", BadHeader),
            ("x,,n\n0,1,3\n", BadHeader),
            ("x,y,n\n0,1\n", BadRow),
            ("x,y,n\n0,2,3\n", NonBinaryValue),
            ("x,y,n\n0,1,3\n0,1,4\n", DuplicateCell),
            ("x,y,n\n0,1,-3\n", BadCount),
            ("x,y,n\n0,1,many\n", BadCount),
            ("x,y,n\n0,1,inf\n", BadCount),
        ],
    )
    def test_malformed_input(self, text, error):
        """Test each malformed input raises its own error."""
        with pytest.raises(error):
            parse_dataset(text)

    def test_error_reports_line(self):
        """Test row errors name the offending line."""
        with pytest.raises(NonBinaryValue, match="Line 3"):
            parse_dataset("x,n\n0,1\n7,1\n")


class TestSources:
    """Test source resolution and digests."""

    def test_reads_file(self, tmp_path):
        """Test plain paths are read from disk."""
        path = tmp_path / "d.csv"
        path.write_text("x,n\n0,1\n1,3\n")
        assert load_dataset(str(path)).n_total == 4

    def test_missing_file(self, tmp_path):
        """Test an unreadable path raises an input error."""
        with pytest.raises(BadHeader):
            read_source(str(tmp_path / "missing.csv"), "data")

    def test_builtin_graph(self):
        """Test graph references resolve to edge lists."""
        assert "A1 <-> A2" in read_source("builtin:twin4cycle", "graph")

    def test_digest(self):
        """Test digests are prefixed sha256 hex strings."""
        digest = text_digest("abc")
        assert digest == (
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        )
