import click

from routes.algebra import point_of
from routes.common import respond
from services.errors import InputError
from services.groebner import ideal_equal
from services.ideals import maximal_ideal, poisson_core
from services.order import OrderIdeal, PoissonOrder, contract_ideal, extend_ideal, order_poisson_core, order_violations


@click.command("order-verify")
@click.argument("order")
@click.pass_context
def order_verify(ctx, order):
    """Check the Poisson order axioms on the basis."""

    def compute(settings):
        A = settings.session().order(order)
        violations = order_violations(A)
        payload = {
            "order": order,
            "rank": A.rank,
            "basis": list(A.names),
            "ok": not violations,
            "violations": [v.to_dict() for v in violations],
        }
        return payload, not violations

    respond(ctx, "order-verify", compute)


@click.command("order-core")
@click.argument("target")
@click.option("--point", default=None, help="With an order TARGET, use the extension of this point's maximal ideal.")
@click.pass_context
def order_core(ctx, target, point):
    """Largest H(Z)-stable two-sided ideal inside an ideal of an order."""

    def compute(settings):
        session = settings.session()
        value = session.get(target, OrderIdeal, PoissonOrder)
        if isinstance(value, PoissonOrder):
            if point is None:
                raise InputError("an order target needs --point")
            I = extend_ideal(maximal_ideal(value.ring, point_of(value.base, point)), value)
        else:
            if point is not None:
                raise InputError(f"{target!r} is already an ideal; drop --point")
            I = value
        A = I.parent
        core = order_poisson_core(I, round_cap=settings.round_cap)
        contraction = contract_ideal(core)
        base_core = poisson_core(contract_ideal(I), A.base, round_cap=settings.round_cap)
        payload = {
            "input": I.format(),
            "ideal": core.format(),
            "contraction": contraction.format(),
            "core_of_contraction": base_core.format(),
            "contraction_identity": ideal_equal(contraction, base_core),
        }
        return payload, payload["contraction_identity"]

    respond(ctx, "order-core", compute)


order_commands = [order_verify, order_core]
