"""
dipcheck - differential privacy checker for DiP automata
Entry point for the command-line interface
"""

from src.cli.commands import cli


def main():
    cli(prog_name="dipcheck")


if __name__ == "__main__":
    main()
