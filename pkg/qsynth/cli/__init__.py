"""
Command-line interface
Group defined here, commands registered in qsynth.cli.commands
"""

import click

from qsynth import create_app
from config import config


@click.group(help="Exact minimum-cost synthesis of 3-qubit NOT/CNOT/CV/CVDG circuits.\n\n"
                  "Wires are numbered 0..2; a binary input pattern is 4*v0 + 2*v1 + v2.")
@click.option('--config', 'config_name', type=click.Choice(sorted(config)), default='default',
              show_default=True, help='Configuration profile from config.py.')
@click.option('-v', '--verbose', is_flag=True, help='Log progress to stderr.')
@click.pass_context
def cli(ctx, config_name, verbose):
    overrides = {'log_level': 'INFO'} if verbose else {}
    ctx.obj = create_app(config_name, **overrides)


from qsynth.cli import commands  # noqa: E402,F401
