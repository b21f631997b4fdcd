"""
Entry point for the qsynth command line
Usage: python cli.py --help
"""

from qsynth.cli import cli

if __name__ == "__main__":
    cli(prog_name='qsynth')
