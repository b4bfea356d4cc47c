"""Test suite for bidi-tools."""
