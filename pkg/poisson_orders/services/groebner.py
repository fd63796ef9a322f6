"""Buchberger's algorithm and the ideal operations built on it.

The engine works on sparse vectors ``{(position, exponent): coefficient}`` so
that ideals (rank one, position 0) and submodules of free modules share one
implementation. Module monomials are compared position-over-term, lower
positions first.
"""
import logging
from itertools import combinations, product

from services.errors import InputError, InternalInvariantError
from services.poly import MonomialOrder, Polynomial, PolynomialRing

logger = logging.getLogger(__name__)


class _Context:
    """Monomial comparison for one ring/order, with memoised sort keys."""

    def __init__(self, ring):
        self.ring = ring
        self._order_key = ring.order.key
        self._keys = {}

    def key(self, mono):
        key = self._keys.get(mono)
        if key is None:
            key = (-mono[0], self._order_key(mono[1]))
            self._keys[mono] = key
        return key

    def lead(self, vec):
        return max(vec, key=self.key)


def _divides(a, b):
    return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))


def _lcm(a, b):
    return (a[0], tuple(max(x, y) for x, y in zip(a[1], b[1])))


def _quotient(a, b):
    return tuple(y - x for x, y in zip(b[1], a[1]))


def _shift(vec, exp, factor):
    return {(pos, tuple(e + s for e, s in zip(mono, exp))): c * factor for (pos, mono), c in vec.items()}


def _axpy(target, vec, exp, factor):
    """target -= factor * x^exp * vec, in place."""
    for (pos, mono), c in vec.items():
        key = (pos, tuple(e + s for e, s in zip(mono, exp)))
        value = target.get(key, 0) - c * factor
        if value:
            target[key] = value
        else:
            target.pop(key, None)


def _sugar(vec):
    return max(sum(mono) for _, mono in vec)


def _monic(vec, ctx):
    lead = ctx.lead(vec)
    inv = 1 / vec[lead]
    return {mono: c * inv for mono, c in vec.items()}


def reduce_vector(vec, basis, ctx):
    """Fully reduce ``vec`` by monic ``basis`` vectors (each given with its lead)."""
    remainder = {}
    work = dict(vec)
    while work:
        lead = ctx.lead(work)
        coeff = work[lead]
        for g_lead, g in basis:
            if _divides(g_lead, lead):
                _axpy(work, g, _quotient(lead, g_lead), coeff)
                break
        else:
            remainder[lead] = coeff
            del work[lead]
    return remainder


def _update(basis, pairs, new_lead, index, rank_one):
    """Gebauer-Moeller pair update when basis element ``index`` is appended."""
    kept = set()
    for i, j in pairs:
        lcm_ij = _lcm(basis[i][0], basis[j][0])
        if (
            _divides(new_lead, lcm_ij)
            and lcm_ij != _lcm(basis[i][0], new_lead)
            and lcm_ij != _lcm(basis[j][0], new_lead)
        ):
            continue
        kept.add((i, j))

    by_lcm = {}
    for i in range(index):
        lead = basis[i][0]
        if lead[0] != new_lead[0]:
            continue
        by_lcm.setdefault(_lcm(lead, new_lead), []).append(i)
    lcms = sorted(by_lcm, key=lambda mono: (sum(mono[1]), mono[1]))
    minimal = []
    for mono in lcms:
        if all(not _divides(other, mono) for other in minimal):
            minimal.append(mono)
    for mono in minimal:
        members = by_lcm[mono]
        if rank_one and any(
            all(a == 0 or b == 0 for a, b in zip(basis[i][0][1], new_lead[1])) for i in members
        ):
            continue
        kept.add((min(members), index))
    return kept


def buchberger(vectors, ring, rank_one=True):
    """Reduced monic Groebner basis of the given sparse vectors, sorted by lead."""
    ctx = _Context(ring)
    basis, sugars, pairs = [], [], set()
    for vec in vectors:
        vec = reduce_vector(vec, basis, ctx)
        if not vec:
            continue
        vec = _monic(vec, ctx)
        lead = ctx.lead(vec)
        basis.append((lead, vec))
        sugars.append(_sugar(vec))
        pairs = _update(basis, pairs, lead, len(basis) - 1, rank_one)

    def pair_key(pair):
        i, j = pair
        lcm = _lcm(basis[i][0], basis[j][0])
        d = sum(lcm[1])
        sugar = max(sugars[i] + d - sum(basis[i][0][1]), sugars[j] + d - sum(basis[j][0][1]))
        return (sugar, ctx.key(lcm), pair)

    rounds = 0
    while pairs:
        pair = min(pairs, key=pair_key)
        pairs.discard(pair)
        i, j = pair
        (lead_i, f), (lead_j, g) = basis[i], basis[j]
        lcm = _lcm(lead_i, lead_j)
        spoly = _shift(f, _quotient(lcm, lead_i), 1)
        _axpy(spoly, g, _quotient(lcm, lead_j), 1)
        remainder = reduce_vector(spoly, basis, ctx)
        rounds += 1
        if not remainder:
            continue
        remainder = _monic(remainder, ctx)
        lead = ctx.lead(remainder)
        basis.append((lead, remainder))
        sugars.append(max(pair_key(pair)[0], _sugar(remainder)))
        pairs = _update(basis, pairs, lead, len(basis) - 1, rank_one)
        if rounds % 50 == 0:
            logger.debug("🧮 Buchberger: %d basis elements, %d pairs left", len(basis), len(pairs))

    return _interreduce([vec for _, vec in basis], ctx)


def _interreduce(vectors, ctx):
    leads = [(ctx.lead(v), v) for v in vectors]
    leads.sort(key=lambda item: ctx.key(item[0]))
    minimal = []
    for lead, vec in leads:
        if all(not _divides(other, lead) for other, _ in minimal):
            minimal.append((lead, vec))
    reduced = []
    for k, (lead, vec) in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        tail = {mono: c for mono, c in vec.items() if mono != lead}
        tail = reduce_vector(tail, others, ctx)
        tail[lead] = vec[lead]
        reduced.append(_monic(tail, ctx))
    reduced.sort(key=lambda v: ctx.key(ctx.lead(v)), reverse=True)
    return reduced


def polynomial_to_vector(f, position=0):
    return {(position, exp): c for exp, c in f.terms.items()}


def vector_to_polynomial(vec, ring):
    return Polynomial(ring, {exp: c for (_, exp), c in vec.items()})


def _check_same_space(ring, polys):
    for p in polys:
        if not ring.same_space(p.ring):
            raise InputError(
                f"mixed variable sets or coefficient fields: {p.ring.variables}/{p.ring.field.name} "
                f"vs {ring.variables}/{ring.field.name}"
            )


class Ideal:
    """An ideal given by generators, with a lazily cached reduced Groebner basis."""

    __slots__ = ("ring", "generators", "_groebner")

    def __init__(self, ring, generators=(), groebner=None):
        gens = []
        for g in generators:
            g = ring.coerce(g)
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._groebner = groebner

    @property
    def cached_groebner(self):
        return self._groebner

    def basis(self):
        """Reduced Groebner basis under the ring's order."""
        label = self.ring.order.label
        if self._groebner is None or self._groebner[0] != label:
            vectors = [polynomial_to_vector(g) for g in self.generators]
            reduced = buchberger(vectors, self.ring)
            self._groebner = (label, tuple(vector_to_polynomial(v, self.ring) for v in reduced))
        return self._groebner[1]

    def is_zero(self):
        return not self.generators

    def is_unit(self):
        basis = self.basis()
        return len(basis) == 1 and basis[0].is_constant()

    def __contains__(self, f):
        return ideal_member(f, self)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None

    def format(self, use_basis=True):
        gens = self.basis() if use_basis else self.generators
        return "(" + ", ".join(g.format() for g in gens) + ")" if gens else "(0)"

    __str__ = format

    def __repr__(self):
        return f"Ideal{self.format(use_basis=False)}"


def normal_form(f, G, order=None):
    """Remainder of ``f`` under full multivariate division by ``G``."""
    ring = f.ring if order is None else f.ring.with_order(order)
    _check_same_space(ring, G)
    ctx = _Context(ring)
    divisors = []
    for g in G:
        if g:
            vec = _monic(polynomial_to_vector(g), ctx)
            divisors.append((ctx.lead(vec), vec))
    return vector_to_polynomial(reduce_vector(polynomial_to_vector(f), divisors, ctx), f.ring)


def groebner_basis(I, order=None):
    """Ideal with the reduced basis cached; re-homed in a ring with ``order`` if given."""
    if order is not None:
        if isinstance(order, str):
            order = MonomialOrder.from_name(order)
        if order != I.ring.order:
            ring = I.ring.with_order(order)
            I = Ideal(ring, [g.with_ring(ring) for g in I.generators])
    basis = I.basis()
    return Ideal(I.ring, basis, groebner=I.cached_groebner)


def buchberger_criterion(basis):
    """True when every S-polynomial of ``basis`` reduces to zero by it."""
    if not basis:
        return True
    ring = basis[0].ring
    ctx = _Context(ring)
    monic = [_monic(polynomial_to_vector(g), ctx) for g in basis if g]
    divisors = [(ctx.lead(v), v) for v in monic]
    for (la, a), (lb, b) in combinations(divisors, 2):
        lcm = _lcm(la, lb)
        spoly = _shift(a, _quotient(lcm, la), 1)
        _axpy(spoly, b, _quotient(lcm, lb), 1)
        if reduce_vector(spoly, divisors, ctx):
            return False
    return True


def ideal_member(f, I):
    _check_same_space(I.ring, [f])
    return not normal_form(I.ring.coerce(f), I.basis())


def ideal_contains(I, J):
    """J is a subset of I."""
    return all(ideal_member(g, I) for g in J.generators)


def ideal_equal(I, J):
    if not I.ring.same_space(J.ring):
        return False
    if I.ring.order == J.ring.order:
        return I.basis() == J.basis()
    return ideal_contains(I, J) and ideal_contains(J, I)


def ideal_sum(I, J):
    _check_same_space(I.ring, J.generators)
    return Ideal(I.ring, I.generators + J.generators)


def ideal_product(I, J):
    _check_same_space(I.ring, J.generators)
    return Ideal(I.ring, [f * g for f in I.generators for g in J.generators])


def _tagged_ring(ring, tag="_t"):
    """Ring with a tag variable in front, eliminated by a block order."""
    name = tag
    while name in ring.variables:
        name = "_" + name
    return PolynomialRing((name,) + ring.variables, ring.field, MonomialOrder("block", (1, ring.nvars)))


def _untag(basis, ring):
    out = []
    for g in basis:
        if all(exp[0] == 0 for exp in g.terms):
            out.append(Polynomial(ring, {exp[1:]: c for exp, c in g.terms.items()}))
    return out


def ideal_intersect(I, J):
    _check_same_space(I.ring, J.generators)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    tagged = _tagged_ring(ring)
    t = tagged.gen(0)
    shift = list(range(1, tagged.nvars))
    gens = [t * f.embed(tagged, shift) for f in I.generators]
    gens += [(1 - t) * g.embed(tagged, shift) for g in J.generators]
    return Ideal(ring, _untag(Ideal(tagged, gens).basis(), ring))


def divide_exact(h, g):
    """h / g for polynomials where g divides h; raises if it does not."""
    if not g:
        raise InputError("division by the zero polynomial")
    ring = h.ring
    lead_g = g.leading_monomial()
    lc_g = g.terms[lead_g]
    quotient, work = ring.zero(), h
    while work:
        lead = work.leading_monomial()
        if any(a < b for a, b in zip(lead, lead_g)):
            raise InternalInvariantError(f"{g} does not divide {h}")
        exp = tuple(a - b for a, b in zip(lead, lead_g))
        term = ring.monomial(exp, work.terms[lead] / lc_g)
        quotient = quotient + term
        work = work - term * g
    return quotient


def ideal_quotient(I, J):
    """I : J = {f : f*J inside I}."""
    _check_same_space(I.ring, J.generators)
    ring = I.ring
    result = Ideal(ring, [ring.one()])
    for g in J.generators:
        meet = ideal_intersect(I, Ideal(ring, [g]))
        part = Ideal(ring, [divide_exact(h, g) for h in meet.basis()])
        result = ideal_intersect(result, part) if not result.is_unit() else part
    return groebner_basis(result)


def saturation(I, g):
    """I : g^infinity."""
    ring = I.ring
    g = ring.coerce(g)
    tagged = _tagged_ring(ring)
    shift = list(range(1, tagged.nvars))
    gens = [f.embed(tagged, shift) for f in I.generators]
    gens.append(tagged.one() - tagged.gen(0) * g.embed(tagged, shift))
    return Ideal(ring, _untag(Ideal(tagged, gens).basis(), ring))


def eliminate(I, variables, order=None):
    """I intersected with the subring in the remaining variables.

    Without ``order`` a block order putting ``variables`` first is used; an
    explicit order must already eliminate them.
    """
    ring = I.ring
    indices = [ring.index(v) for v in variables]
    if order is not None:
        if isinstance(order, str):
            order = MonomialOrder.from_name(order)
        if not order.eliminates(indices):
            raise InputError(f"order {order.label} does not eliminate {', '.join(variables)}")
        work_ring = ring.with_order(order)
        basis = Ideal(work_ring, [g.with_ring(work_ring) for g in I.generators]).basis()
        kept = [g.with_ring(ring) for g in basis if all(not any(exp[i] for i in indices) for exp in g.terms)]
        return Ideal(ring, kept)
    rest = [i for i in range(ring.nvars) if i not in set(indices)]
    permuted_vars = [ring.variables[i] for i in indices + rest]
    blocks = tuple(size for size in (len(indices), len(rest)) if size)
    work_ring = PolynomialRing(permuted_vars, ring.field, MonomialOrder("block", blocks))
    to_work = [0] * ring.nvars
    for new, old in enumerate(indices + rest):
        to_work[old] = new
    back = [0] * ring.nvars
    for new, old in enumerate(indices + rest):
        back[new] = old
    basis = Ideal(work_ring, [g.embed(work_ring, to_work) for g in I.generators]).basis()
    kept = [g.embed(ring, back) for g in basis if all(not any(exp[:len(indices)]) for exp in g.terms)]
    return Ideal(ring, kept)


def radical_member(f, I):
    """Rabinowitsch: f is in rad(I) iff I + (1 - t*f) is the unit ideal."""
    ring = I.ring
    f = ring.coerce(f)
    if not f:
        return True
    tagged = _tagged_ring(ring)
    shift = list(range(1, tagged.nvars))
    gens = [g.embed(tagged, shift) for g in I.generators]
    gens.append(tagged.one() - tagged.gen(0) * f.embed(tagged, shift))
    return Ideal(tagged, gens).is_unit()


def _leading_monomials(I):
    return [g.leading_monomial() for g in I.basis()]


def krull_dimension(I):
    """Size of a largest set of variables independent modulo LT(I); -1 for the unit ideal."""
    if I.is_unit():
        return -1
    leads = _leading_monomials(I)
    n = I.ring.nvars
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            allowed = set(subset)
            if not any(all(i in allowed for i, e in enumerate(lead) if e) for lead in leads):
                return size
    return 0


def standard_monomials(I):
    """Monomials outside LT(I); requires a zero-dimensional ideal."""
    if I.is_unit():
        return []
    if krull_dimension(I) != 0:
        raise InputError(f"{I} is not zero-dimensional")
    leads = _leading_monomials(I)
    n = I.ring.nvars
    bounds = []
    for i in range(n):
        pure = [lead[i] for lead in leads if all(e == 0 for k, e in enumerate(lead) if k != i)]
        bounds.append(min(pure))
    result = []
    for exp in product(*(range(b) for b in bounds)):
        if not any(all(a >= b for a, b in zip(exp, lead)) for lead in leads):
            result.append(exp)
    result.sort(key=I.ring.order.key, reverse=True)
    return result


def quotient_dimension(I):
    """dim_k Z/I for a zero-dimensional ideal."""
    return len(standard_monomials(I))
