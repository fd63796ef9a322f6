import logging
import sys

import click

from routes.algebra import algebra_commands
from routes.common import Settings
from routes.envelope import envelope_commands
from routes.ideals import ideal_commands
from routes.modules import module_commands
from routes.orders import order_commands
from routes.semiclassical import semiclassical_commands
from routes.session import session_commands
from services import config


@click.group()
@click.option("--input", "input_path", type=click.Path(dir_okay=False), default=None, help="Session document (JSON).")
@click.option("--order", default=None, help="Monomial order: degrevlex, deglex, lex or block:n1,n2,...")
@click.option("--degree-cap", type=click.IntRange(min=0), default=None, help="Degree cap for linear-algebra searches.")
@click.option("--round-cap", type=click.IntRange(min=1), default=None, help="Iteration cap for core and closure loops.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--timing", is_flag=True, help="Include wall-clock seconds in the result.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Also write the result to this file.")
@click.option("-v", "--verbose", count=True, help="Log progress to stderr (-vv for debug).")
@click.pass_context
def cli(ctx, input_path, order, degree_cap, round_cap, fmt, timing, output, verbose):
    """Exact computations with Poisson algebras, Poisson orders and their modules."""
    level = {0: config.LOG_LEVEL, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(stream=sys.stderr, level=level.upper(), format="%(levelname)s %(name)s: %(message)s", force=True)
    ctx.obj = Settings(input_path, order, degree_cap, round_cap, fmt, timing, output)


# Register commands
for group in (
    algebra_commands,
    ideal_commands,
    order_commands,
    envelope_commands,
    module_commands,
    semiclassical_commands,
    session_commands,
):
    for command in group:
        cli.add_command(command)


if __name__ == "__main__":
    cli()
