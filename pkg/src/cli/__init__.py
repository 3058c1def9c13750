"""
Command Line
============
click entry point: ``modspace`` (see cli.main).
"""

from .main import cli, main

__all__ = ["cli", "main"]
