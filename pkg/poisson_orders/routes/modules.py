import click

from routes.common import respond
from services.errors import InputError
from services.order import PoissonOrder
from services.poisson import PoissonAlgebra
from services.poisson_module import (
    induced_module,
    ividealiii_check,
    module_annihilator_Z,
    module_check,
    torsion_ideal,
    truncated_regular_module,
)
from services.session import module_dict


def _base(parent):
    return parent.base if isinstance(parent, PoissonOrder) else parent


@click.command("module-check")
@click.argument("module")
@click.pass_context
def module_check_command(ctx, module):
    """Check the Poisson module axioms."""

    def compute(settings):
        M, parent = settings.session().module(module)
        report = module_check(M, parent)
        return {"module": module, "dim": M.dim, **report.to_dict()}, report.ok

    respond(ctx, "module-check", compute)


@click.command("annihilator")
@click.argument("module")
@click.pass_context
def annihilator(ctx, module):
    """Polynomials p with p(X) = 0, up to the degree cap."""

    def compute(settings):
        M, parent = settings.session().module(module)
        result = module_annihilator_Z(M, _base(parent).ring, settings.degree_cap)
        return {"module": module, **result.to_dict()}, True

    respond(ctx, "annihilator", compute)


@click.command("torsion")
@click.argument("module")
@click.pass_context
def torsion(ctx, module):
    """A maximal vector annihilator and its witness vector."""

    def compute(settings):
        M, parent = settings.session().module(module)
        result = torsion_ideal(M, _base(parent).ring, settings.degree_cap)
        return {"module": module, **result.to_dict()}, True

    respond(ctx, "torsion", compute)


@click.command("ivideal-check")
@click.argument("module")
@click.pass_context
def ivideal_check(ctx, module):
    """Compare the Poisson core of the torsion ideal with the annihilator (module assumed simple)."""

    def compute(settings):
        M, parent = settings.session().module(module)
        report = ividealiii_check(M, _base(parent), settings.degree_cap)
        return {"module": module, **report.to_dict()}, report.ok

    respond(ctx, "ivideal-check", compute)


@click.command("induce")
@click.argument("order")
@click.argument("module")
@click.pass_context
def induce(ctx, order, module):
    """A (x)_Z M for a module M over the base algebra."""

    def compute(settings):
        session = settings.session()
        A = session.order(order)
        M, parent = session.module(module)
        if not isinstance(parent, PoissonAlgebra) or parent != A.base:
            raise InputError(f"{module!r} must be a module over the base algebra of {order!r}")
        induced = induced_module(A, M)
        report = module_check(induced, A)
        payload = {"order": order, "module": module, "ok": report.ok}
        payload.update(module_dict(induced, A.base.variables, A.names if induced.E is not None else None))
        return payload, report.ok

    respond(ctx, "induce", compute)


@click.command("regular-module")
@click.argument("algebra")
@click.option("--degree", type=int, required=True, help="Keep monomials of degree <= this.")
@click.pass_context
def regular_module(ctx, algebra, degree):
    """The algebra modulo monomials above a degree, acting on itself."""

    def compute(settings):
        if degree < 0:
            raise InputError("--degree must be non-negative")
        P = settings.session().algebra(algebra)
        M = truncated_regular_module(P, degree)
        report = module_check(M, P)
        return {"algebra": algebra, "ok": report.ok, **module_dict(M, P.variables)}, report.ok

    respond(ctx, "regular-module", compute)


module_commands = [module_check_command, annihilator, torsion, ivideal_check, induce, regular_module]
