"""
bidi CLI command modules.

Each command returns a process exit code; ``main`` turns it into ``typer.Exit``.
"""
