"""Certificates that a Poisson ideal found degree by degree is the whole core.

For brackets of degree <= 1 the ideals J_D generated by P(C) cut to degree D
form an increasing chain of Poisson ideals inside C. A member J of that chain
equals P(C), for a prime C, as soon as some rational point p of V(C) has

- V(C) smooth at p,
- J prime with V(J) smooth at p of dimension d, where d is the rank of
  T_p V(C) together with the Hamiltonian vectors at p.

The Hamiltonian flows out of V(C) sweep a formal germ of dimension at least d
at p and every element of P(C) vanishes on it, so P(C) lies in J.

Factorisation and the rational points of zero-dimensional ideals come from
sympy; everything else stays in the exact kernel.
"""
import logging
from fractions import Fraction

import sympy
from sympy.polys.polyerrors import PolynomialError

from services.groebner import Ideal, krull_dimension, quotient_dimension
from services.linalg import nullspace, rank
from services.poly import Polynomial

logger = logging.getLogger(__name__)

_SAMPLES = (
    (0,),
    (1,),
    (1, 2, 3, 5, 7, 11),
    (2, -1, 3, -2, 5, -3),
    (3, 1, 4, 1, 5, 9),
    (-1, 2, -3, 4, -5, 6),
)


def _fill(sample, size):
    return tuple(sample[i % len(sample)] for i in range(size))


def _symbols(ring):
    return tuple(sympy.Symbol(name) for name in ring.variables)


def to_sympy(f):
    """A polynomial over the rationals as a sympy Poly in the ring's variables."""
    terms = {exp: sympy.Rational(c.numerator, c.denominator) for exp, c in f.terms.items()}
    return sympy.Poly.from_dict(terms, *_symbols(f.ring), domain="QQ")


def from_sympy(poly, ring):
    return Polynomial(ring, {exp: Fraction(int(c.p), int(c.q)) for exp, c in poly.terms()})


def irreducible_factors(f):
    """[(factor, multiplicity)] over Q, or None over a cyclotomic field."""
    if not f.ring.field.is_rational:
        return None
    _, factors = to_sympy(f).factor_list()
    return [(from_sympy(g, f.ring), k) for g, k in factors]


def is_certified_prime(J):
    """Zero, generated by linear polynomials, or generated by one irreducible polynomial."""
    if J.is_zero():
        return True
    if J.is_unit():
        return False
    basis = J.basis()
    if all(g.degree() == 1 for g in basis):
        return True
    if len(basis) == 1:
        factors = irreducible_factors(basis[0])
        return factors is not None and len(factors) == 1 and factors[0][1] == 1
    return False


def rational_points(I):
    """Rational points of a zero-dimensional ideal over Q."""
    ring = I.ring
    basis = I.basis()
    try:
        solutions = sympy.solve_poly_system([to_sympy(g).as_expr() for g in basis], *_symbols(ring))
    except (NotImplementedError, PolynomialError):
        logger.debug("❌ sympy could not solve %s", I)
        return []
    points = set()
    for solution in solutions or []:
        if all(value.is_Rational for value in solution):
            point = tuple(Fraction(int(value.p), int(value.q)) for value in solution)
            if not any(g.evaluate(point) for g in basis):
                points.add(point)
    return sorted(points)


def point_ideal(ring, point):
    return Ideal(ring, [x - ring.field.coerce(a) for x, a in zip(ring.gens(), point)])


def prime_components(I):
    """Certified primes whose intersection is I, or None when none are found."""
    if is_certified_prime(I):
        return [I]
    ring = I.ring
    basis = I.basis()
    if len(basis) == 1:
        factors = irreducible_factors(basis[0])
        if factors and all(k == 1 for _, k in factors):
            return [Ideal(ring, [g]) for g, _ in factors]
        return None
    if ring.field.is_rational and krull_dimension(I) == 0:
        points = rational_points(I)
        # all points rational and I radical
        if len(points) == quotient_dimension(I):
            return [point_ideal(ring, p) for p in points]
    return None


def sample_points(C):
    """Rational points of V(C) for a zero, linear or principal C."""
    ring = C.ring
    field = ring.field
    n = ring.nvars
    basis = C.basis()
    if not basis:
        for sample in _SAMPLES:
            yield tuple(field.coerce(v) for v in _fill(sample, n))
        return
    if all(g.degree() == 1 for g in basis):
        leads = [g.leading_monomial().index(1) for g in basis]
        free = [i for i in range(n) if i not in leads]
        for sample in _SAMPLES:
            point = [field.zero()] * n
            for i, value in zip(free, _fill(sample, len(free))):
                point[i] = field.coerce(value)
            for g, lead in zip(basis, leads):
                point[lead] = -(g - ring.gen(lead)).evaluate(point)
            yield tuple(point)
        return
    if len(basis) != 1:
        return
    g = basis[0]
    for k in range(n):
        if max(exp[k] for exp in g.terms) != 1:
            continue
        a = g.derivative(k)
        b = g - ring.gen(k) * a
        others = [i for i in range(n) if i != k]
        for sample in _SAMPLES:
            point = [field.zero()] * n
            for i, value in zip(others, _fill(sample, n - 1)):
                point[i] = field.coerce(value)
            denominator = a.evaluate(point)
            if denominator:
                point[k] = -b.evaluate(point) / denominator
                yield tuple(point)


def _jacobian(polys, point, n):
    return [[f.derivative(j).evaluate(point) for j in range(n)] for f in polys]


def swept_rank(C, P, point):
    """Rank of T_p V(C) plus the Hamiltonian vectors at p."""
    n = P.nvars
    field = P.ring.field
    tangent = nullspace(_jacobian(C.basis(), point, n), n, field.zero(), field.one())
    hamiltonians = [[P.table[i][j].evaluate(point) for j in range(n)] for i in range(n)]
    return rank(tangent + hamiltonians, n)


def certify_core(C, J, P):
    """True when the Poisson ideal J inside the certified prime C is provably P(C)."""
    if not is_certified_prime(J):
        return False
    n = P.nvars
    height = n - krull_dimension(C)
    for point in sample_points(C):
        if rank(_jacobian(C.basis(), point, n), n) != height:
            continue
        swept = swept_rank(C, P, point)
        if n - rank(_jacobian(J.basis(), point, n), n) == swept:
            logger.debug("✅ core %s certified at %s (swept rank %d)", J, point, swept)
            return True
    return False
