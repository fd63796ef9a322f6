import json

import click

from routes.common import respond
from services.session import serialize


@click.command("objects")
@click.pass_context
def objects(ctx):
    """List the objects declared in the session."""

    def compute(settings):
        session = settings.session()
        listing = [{"name": name, "kind": spec.kind} for name, (_, spec) in session.specs.items()]
        return {"session": settings.input, "objects": listing}, True

    respond(ctx, "objects", compute)


@click.command("normalize")
@click.pass_context
def normalize(ctx):
    """The session in canonical form."""

    def compute(settings):
        return {"document": json.loads(serialize(settings.session()))}, True

    respond(ctx, "normalize", compute)


session_commands = [objects, normalize]
