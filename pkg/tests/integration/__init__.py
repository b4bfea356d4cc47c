"""Integration tests for bidi-tools."""
