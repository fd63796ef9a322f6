import click

from routes.algebra import point_of
from routes.common import respond
from services.errors import InputError
from services.groebner import Ideal
from services.ideals import is_poisson_stable, maximal_ideal, poisson_closure, poisson_core, symplectic_core_ideal
from services.poisson import PoissonAlgebra


def resolve_ideal(session, target, point, generators):
    """(algebra, ideal) from an ideal name, or an algebra name plus --point / --generators."""
    value = session.get(target)
    if isinstance(value, Ideal):
        if point or generators:
            raise InputError(f"{target!r} is already an ideal; drop --point/--generators")
        return session.parent_of(target), value
    if not isinstance(value, PoissonAlgebra):
        raise InputError(f"{target!r} is neither an algebra nor an ideal of an algebra")
    if point and generators:
        raise InputError("give either --point or --generators, not both")
    if point:
        return value, maximal_ideal(value.ring, point_of(value, point))
    if generators:
        return value, Ideal(value.ring, [value.ring.coerce(g) for g in generators.split(";")])
    raise InputError("an algebra target needs --point or --generators")


def _ideal_options(fn):
    fn = click.option("--generators", default=None, help="Semicolon-separated generators.")(fn)
    fn = click.option("--point", default=None, help="Use the maximal ideal of this point.")(fn)
    return fn


@click.command("core")
@click.argument("target")
@_ideal_options
@click.pass_context
def core(ctx, target, point, generators):
    """Poisson core: the largest Poisson ideal inside the given ideal."""

    def compute(settings):
        P, I = resolve_ideal(settings.session(), target, point, generators)
        result = poisson_core(I, P, round_cap=settings.round_cap)
        return {"input": I.format(use_basis=False), "ideal": result.format()}, True

    respond(ctx, "core", compute)


@click.command("closure")
@click.argument("target")
@_ideal_options
@click.pass_context
def closure(ctx, target, point, generators):
    """Smallest Poisson ideal containing the given ideal."""

    def compute(settings):
        P, I = resolve_ideal(settings.session(), target, point, generators)
        result = poisson_closure(I, P, round_cap=settings.round_cap)
        return {"input": I.format(use_basis=False), "ideal": result.format()}, True

    respond(ctx, "closure", compute)


@click.command("symplectic-core")
@click.argument("algebra")
@click.option("--point", required=True, help="Comma-separated coordinates.")
@click.pass_context
def symplectic_core(ctx, algebra, point):
    """Core of the maximal ideal of a point."""

    def compute(settings):
        P = settings.session().algebra(algebra)
        result = symplectic_core_ideal(point_of(P, point), P, round_cap=settings.round_cap)
        return {"algebra": algebra, "point": point, "ideal": result.format()}, True

    respond(ctx, "symplectic-core", compute)


@click.command("poisson-check")
@click.argument("target")
@_ideal_options
@click.pass_context
def poisson_check(ctx, target, point, generators):
    """Is the ideal stable under every Hamiltonian derivation?"""

    def compute(settings):
        P, I = resolve_ideal(settings.session(), target, point, generators)
        report = is_poisson_stable(I, P)
        return report.to_dict(), report.is_poisson

    respond(ctx, "poisson-check", compute)


ideal_commands = [core, closure, symplectic_core, poisson_check]
