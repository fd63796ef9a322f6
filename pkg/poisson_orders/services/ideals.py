"""Poisson ideals: stability, closure, core and symplectic cores of points.

``poisson_core`` computes the largest Poisson ideal inside I in one of two
ways. When every bracket entry has degree <= 1 the ideal is split into
certified primes (see ``services.certificates``) and, for each prime C, the
Poisson ideals generated by P(C) cut to degree D are produced for growing D
until one of them is certified to be all of P(C). Otherwise, or when no
certificate applies, the differential iteration
I_{k+1} = {f in I_k : {x_i, f} in I_k for all i} runs through syzygy kernels;
it is exact once two rounds agree.
"""
import logging
from dataclasses import dataclass

from services import config
from services.certificates import certify_core, prime_components
from services.errors import InputError, InternalInvariantError
from services.groebner import Ideal, groebner_basis, ideal_equal, ideal_intersect, ideal_member, normal_form
from services.linalg import largest_stable_subspace, nullspace
from services.modules import syzygy_kernel
from services.poisson import bracket
from services.poly import Polynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PoissonIdealReport:
    ideal: Ideal
    is_poisson: bool
    witnesses: tuple = ()

    def to_dict(self):
        variables = self.ideal.ring.variables
        return {
            "ideal": self.ideal.format(use_basis=False),
            "is_poisson": self.is_poisson,
            "witnesses": [
                {"variable": variables[i], "generator": str(f), "bracket": str(value)}
                for i, f, value in self.witnesses
            ],
        }


def maximal_ideal(ring, point):
    if len(point) != ring.nvars:
        raise InputError(f"point has {len(point)} coordinates, ring has {ring.nvars} variables")
    return Ideal(ring, [x - ring.field.coerce(a) for x, a in zip(ring.gens(), point)])


def is_poisson_stable(I, P):
    """Check {x_i, f_j} in I for every variable and every generator."""
    witnesses = []
    for f in I.generators:
        for i, x in enumerate(P.ring.gens()):
            value = bracket(x, f, P)
            if value and not ideal_member(value, I):
                witnesses.append((i, f, value))
    return PoissonIdealReport(I, not witnesses, tuple(witnesses))


def poisson_closure(I, P, round_cap=None):
    """Smallest Poisson ideal containing I."""
    round_cap = round_cap or config.ROUND_CAP
    current = groebner_basis(I)
    gens = P.ring.gens()
    for rounds in range(1, round_cap + 1):
        basis = current.basis()
        extra = [bracket(x, f, P) for f in basis for x in gens]
        grown = Ideal(I.ring, list(basis) + extra)
        if ideal_equal(grown, current):
            logger.info("✅ closure stabilised after %d round(s)", rounds)
            return groebner_basis(grown)
        current = grown
    raise InternalInvariantError(f"poisson closure did not stabilise within {round_cap} rounds", code="round_cap")


def graded_core_candidates(I, P, round_cap=None):
    """Ideals generated by P(I) cut to degree <= D, for D = start, start + 1, ...

    Every H(x_i) maps polynomials of degree <= D to degree <= D, so P(I) cut to
    degree D is the largest H-stable subspace of I cut to degree D. Each
    yielded ideal is a Poisson ideal inside P(I); the chain ends at P(I) but
    nothing here says when.
    """
    round_cap = round_cap or config.ROUND_CAP
    ring = I.ring
    field = ring.field
    zero, one = field.zero(), field.one()
    basis = I.basis()
    gens = ring.gens()
    nf_cache, op_cache = {}, {}

    def reduce(exp):
        if exp not in nf_cache:
            nf_cache[exp] = normal_form(ring.monomial(exp), basis).terms
        return nf_cache[exp]

    def hamiltonian(i, exp):
        if (i, exp) not in op_cache:
            op_cache[(i, exp)] = bracket(gens[i], ring.monomial(exp), P).terms
        return op_cache[(i, exp)]

    start = max(g.degree() for g in basis)
    for degree in range(start, start + round_cap):
        monomials = list(ring.monomials(degree))
        index = {exp: k for k, exp in enumerate(monomials)}
        rows = {}
        for col, exp in enumerate(monomials):
            for key, c in reduce(exp).items():
                rows.setdefault(key, [zero] * len(monomials))[col] = c
        inside = nullspace(list(rows.values()), len(monomials), zero, one)

        def as_operator(i):
            images = []
            for exp in monomials:
                image = {}
                for target, c in hamiltonian(i, exp).items():
                    if target not in index:
                        raise InternalInvariantError(f"hamiltonian leaves degree {degree}")
                    image[index[target]] = c
                images.append(image)

            def apply(vector):
                out = [zero] * len(monomials)
                for k, c in enumerate(vector):
                    if c:
                        for t, b in images[k].items():
                            out[t] = out[t] + c * b
                return out

            return apply

        stable = largest_stable_subspace(inside, [as_operator(i) for i in range(ring.nvars)], len(monomials), zero, one)
        logger.debug("🧮 graded core: degree %d, stable subspace of dimension %d", degree, len(stable))
        yield degree, groebner_basis(
            Ideal(ring, [Polynomial(ring, {monomials[k]: c for k, c in enumerate(row) if c}) for row in stable])
        )


def _certified_core(C, P, round_cap):
    """P(C) for a certified prime C, or None when no candidate could be certified."""
    C = groebner_basis(C)
    if is_poisson_stable(C, P).is_poisson:
        return C
    previous = None
    for degree, J in graded_core_candidates(C, P, round_cap):
        if previous is not None and J.basis() == previous:
            continue
        previous = J.basis()
        if certify_core(C, J, P):
            logger.info("✅ graded core certified at degree %d", degree)
            return J
    return None


def _graded_core(I, P, round_cap):
    components = prime_components(I)
    if components is None:
        return None
    cores = []
    for C in components:
        core = _certified_core(C, P, round_cap)
        if core is None:
            return None
        cores.append(core)
    result = cores[0]
    for core in cores[1:]:
        result = ideal_intersect(result, core)
    return groebner_basis(result)


def _differential_core(I, P, round_cap):
    ring = I.ring
    gens = ring.gens()
    current = groebner_basis(I)
    for rounds in range(1, round_cap + 1):
        basis = current.basis()
        rows = [tuple(bracket(x, f, P) for x in gens) for f in basis]
        kernel = syzygy_kernel(rows, current)
        shrunk = Ideal(ring, [sum((g * f for g, f in zip(vec, basis)), ring.zero()) for vec in kernel.generators])
        if ideal_equal(shrunk, current):
            logger.info("✅ core stabilised after %d round(s)", rounds)
            return groebner_basis(shrunk)
        current = shrunk
    raise InternalInvariantError(f"poisson core did not stabilise within {round_cap} rounds", code="round_cap")


def poisson_core(I, P, round_cap=None):
    """Largest Poisson ideal contained in I."""
    round_cap = round_cap or config.ROUND_CAP
    if I.is_zero() or I.is_unit():
        return groebner_basis(I)
    if is_poisson_stable(groebner_basis(I), P).is_poisson:
        return groebner_basis(I)
    if P.max_entry_degree() <= 1:
        core = _graded_core(I, P, round_cap)
        if core is not None:
            return core
        logger.info("⚠️ no certified graded core for %s, running the differential iteration", I)
    return _differential_core(I, P, round_cap)


def symplectic_core_ideal(point, P, round_cap=None):
    return poisson_core(maximal_ideal(P.ring, point), P, round_cap=round_cap)
