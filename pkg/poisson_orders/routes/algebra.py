import click

from routes.common import parse_point, respond
from services.errors import InputError
from services.poisson import bracket as poisson_bracket
from services.poisson import hamiltonian as hamiltonian_vector
from services.poisson import jacobi_check, leaf_rank, localize, poisson_centre
from services.session import constant_value


def point_of(P, text):
    values = parse_point(text)
    if len(values) != P.nvars:
        raise InputError(f"point has {len(values)} coordinates, {P.nvars} expected")
    return [constant_value(P.ring, v) for v in values]


@click.command("jacobi")
@click.argument("algebra")
@click.pass_context
def jacobi(ctx, algebra):
    """Check the Jacobi identity on every generator triple."""

    def compute(settings):
        P = settings.session().algebra(algebra)
        report = jacobi_check(P)
        return {"algebra": algebra, **report.to_dict()}, report.ok

    respond(ctx, "jacobi", compute)


@click.command("bracket")
@click.argument("algebra")
@click.argument("f")
@click.argument("g")
@click.pass_context
def bracket(ctx, algebra, f, g):
    """{F, G} in ALGEBRA."""

    def compute(settings):
        P = settings.session().algebra(algebra)
        return {"algebra": algebra, "value": str(poisson_bracket(f, g, P))}, True

    respond(ctx, "bracket", compute)


@click.command("hamiltonian")
@click.argument("algebra")
@click.argument("z")
@click.option("--apply", "target", default=None, help="Apply H(Z) to this polynomial.")
@click.pass_context
def hamiltonian(ctx, algebra, z, target):
    """Components {Z, x_i} of the Hamiltonian derivation H(Z)."""

    def compute(settings):
        P = settings.session().algebra(algebra)
        components = hamiltonian_vector(z, P)
        payload = {"algebra": algebra, "components": {x: str(c) for x, c in zip(P.variables, components)}}
        if target is not None:
            payload["value"] = str(poisson_bracket(z, target, P))
        return payload, True

    respond(ctx, "hamiltonian", compute)


@click.command("centre")
@click.argument("algebra")
@click.option("--degree", type=int, default=None, help="Degree bound (defaults to --degree-cap or 2).")
@click.pass_context
def centre(ctx, algebra, degree):
    """Casimir elements up to a degree bound."""

    def compute(settings):
        P = settings.session().algebra(algebra)
        bound = degree if degree is not None else (settings.degree_cap or 2)
        basis = poisson_centre(P, bound)
        return {"algebra": algebra, "degree": bound, "casimirs": [str(p) for p in basis]}, True

    respond(ctx, "centre", compute)


@click.command("leaf-rank")
@click.argument("algebra")
@click.option("--point", required=True, help="Comma-separated coordinates.")
@click.pass_context
def leaf_rank_command(ctx, algebra, point):
    """Rank of the bracket matrix at a point."""

    def compute(settings):
        P = settings.session().algebra(algebra)
        return {"algebra": algebra, "point": point, "rank": leaf_rank(P, point_of(P, point))}, True

    respond(ctx, "leaf-rank", compute)


@click.command("localize")
@click.argument("algebra")
@click.argument("s")
@click.argument("f")
@click.argument("g")
@click.option("--powers", default="0,0", help="k,l for the fractions F/S^k and G/S^l.")
@click.pass_context
def localize_command(ctx, algebra, s, f, g, powers):
    """{F/S^k, G/S^l} in the localization at S."""

    def compute(settings):
        P = settings.session().algebra(algebra)
        try:
            k, l = (int(part) for part in powers.split(","))
        except ValueError:
            raise InputError(f"--powers must look like k,l; got {powers!r}") from None
        if k < 0 or l < 0:
            raise InputError("powers must be non-negative")
        L = localize(P, s)
        value = L.bracket(L.fraction(f, k), L.fraction(g, l))
        return {"algebra": algebra, "denominator": str(L.denominator), "value": value.format()}, True

    respond(ctx, "localize", compute)


algebra_commands = [jacobi, bracket, hamiltonian, centre, leaf_rank_command, localize_command]
