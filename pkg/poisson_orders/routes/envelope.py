import click

from routes.common import respond
from services.envelope import Envelope, diamond_overlap_check, env_mul, pbw_dimension_check, ugd_compare
from services.errors import InputError
from services.order import PoissonOrder
from services.poisson import PoissonAlgebra, named_lie_algebra, structure_constants


def _target(settings, name):
    return settings.session().get(name, PoissonAlgebra, PoissonOrder)


@click.command("env-mul")
@click.argument("target")
@click.argument("u")
@click.argument("v")
@click.pass_context
def env_mul_command(ctx, target, u, v):
    """Product of two elements of the enveloping algebra, in PBW normal form."""

    def compute(settings):
        env = Envelope(_target(settings, target))
        product = env_mul(env.parse(u), env.parse(v))
        return {"target": target, "value": product.format()}, True

    respond(ctx, "env-mul", compute)


@click.command("pbw-check")
@click.argument("target")
@click.option("--k", "k", type=int, required=True, help="Delta-degree bound.")
@click.option("--d", "d", type=int, required=True, help="Polynomial degree bound.")
@click.pass_context
def pbw_check(ctx, target, k, d):
    """Compare normal-monomial counts with the PBW prediction."""

    def compute(settings):
        if k < 0 or d < 0:
            raise InputError("--k and --d must be non-negative")
        report = pbw_dimension_check(_target(settings, target), k, d)
        return {"target": target, "k": k, "d": d, **report.to_dict()}, report.ok

    respond(ctx, "pbw-check", compute)


@click.command("overlap-check")
@click.argument("target")
@click.pass_context
def overlap_check(ctx, target):
    """Resolve every overlap of the rewriting rules both ways."""

    def compute(settings):
        report = diamond_overlap_check(_target(settings, target))
        return {"target": target, **report.to_dict()}, report.ok

    respond(ctx, "overlap-check", compute)


@click.command("ugd-compare")
@click.argument("algebra", required=False)
@click.option("--lie", default=None, help="Use a named Lie algebra instead of a session algebra.")
@click.pass_context
def ugd_compare_command(ctx, algebra, lie):
    """Compare the enveloping algebra of a Lie-Poisson algebra with U(g (x) k[eps])."""

    def compute(settings):
        if (algebra is None) == (lie is None):
            raise InputError("give exactly one of ALGEBRA or --lie")
        if lie is not None:
            variables, constants = named_lie_algebra(lie)
        else:
            P = settings.session().algebra(algebra)
            variables, constants = P.variables, structure_constants(P)
        report = ugd_compare(constants, variables)
        return {"algebra": algebra or lie, **report.to_dict()}, report.ok

    respond(ctx, "ugd-compare", compute)


envelope_commands = [env_mul_command, pbw_check, overlap_check, ugd_compare_command]
