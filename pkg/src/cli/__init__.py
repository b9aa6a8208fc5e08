"""
CLI module for dipcheck
"""

from src.cli.commands import cli

__all__ = [
    "cli",
]
