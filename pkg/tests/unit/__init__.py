"""Unit tests for bidi-tools."""
