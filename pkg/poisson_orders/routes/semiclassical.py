import click

from routes.common import respond
from services.errors import InputError
from services.semiclassical import QuantumAffineSpace, centrality_check, ell_centre_bracket
from services.session import serialize_algebra


def _space(settings, name, n):
    if (name is None) == (n is None):
        raise InputError("give exactly one of SPACE or --n")
    if name is not None:
        return settings.session().get(name, QuantumAffineSpace)
    return QuantumAffineSpace(n)


@click.command("q-specialize")
@click.argument("space", required=False)
@click.option("--n", "n", type=int, default=None, help="Number of generators.")
@click.option("--ell", type=int, required=True, help="Order of the root of unity.")
@click.pass_context
def q_specialize(ctx, space, n, ell):
    """Poisson bracket on the l-centre of quantum affine space."""

    def compute(settings):
        Q = _space(settings, space, n)
        P = ell_centre_bracket(Q, ell)
        return {"n": Q.n, "ell": ell, "algebra": serialize_algebra(P, f"centre_{Q.n}_{ell}")}, True

    respond(ctx, "q-specialize", compute)


@click.command("centrality")
@click.argument("space", required=False)
@click.option("--n", "n", type=int, default=None, help="Number of generators.")
@click.option("--ell", type=int, required=True, help="Order of the root of unity.")
@click.option("--generic", is_flag=True, help="Check for generic q instead of q = zeta.")
@click.pass_context
def centrality(ctx, space, n, ell, generic):
    """Are the l-th powers of the generators central?"""

    def compute(settings):
        Q = _space(settings, space, n)
        report = centrality_check(Q, ell, specialize=not generic)
        return {"n": Q.n, "ell": ell, **report.to_dict()}, report.ok

    respond(ctx, "centrality", compute)


semiclassical_commands = [q_specialize, centrality]
