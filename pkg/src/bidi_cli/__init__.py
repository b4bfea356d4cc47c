"""
bidi CLI - Command-line interface for bidi-tools.

Fits bi-directed graph models and symmetry models to binary contingency
tables and prints deterministic JSON reports or rich summary tables.
"""

__version__ = "0.1.0"
