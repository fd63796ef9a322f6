"""Quantum affine space and the Poisson bracket on its l-centre.

Elements of the quantum affine space on X_1..X_n are dicts
{exponent vector: Laurent polynomial in q}, with normal ordering
X^a * X^b = q^(sum_{i<j} b_i a_j) X^(a+b). At q = zeta_l the l-th powers
u_i = X_i^l are central, and {u_i, u_j} is the value at zeta of
[X_i^l, X_j^l] / (q - zeta).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from services import config
from services.errors import InputError, InternalInvariantError
from services.field import CoefficientField
from services.poisson import PoissonAlgebra, jacobi_check
from services.poly import PolynomialRing

logger = logging.getLogger(__name__)


class LaurentPolynomial:
    """sum c_k q^k over the rationals, k any integer."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def q_power(cls, k):
        return cls({k: 1})

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return LaurentPolynomial(terms)

    def __neg__(self):
        return LaurentPolynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        terms = {}
        for k, c in self.terms.items():
            for l, d in other.terms.items():
                terms[k + l] = terms.get(k + l, 0) + c * d
        return LaurentPolynomial(terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def evaluate(self, field):
        """Value at q = zeta in ``field``."""
        zeta = field.zeta()
        total = field.zero()
        for k, c in self.terms.items():
            total = total + zeta ** (k % field.ell) * c
        return total

    def divide_at(self, field):
        """(self / (q - zeta)) evaluated at zeta; the division must be exact."""
        if not self.terms:
            return field.zero()
        low = min(self.terms)
        top = max(self.terms) - low
        coeffs = [field.coerce(self.terms.get(low + k, 0)) for k in range(top + 1)]
        zeta = field.zeta()
        # synthetic division, highest degree first
        quotient, carry = [], field.zero()
        for c in reversed(coeffs):
            carry = c + carry * zeta
            quotient.append(carry)
        remainder = quotient.pop()
        if remainder:
            raise InternalInvariantError(
                f"{self.format()} is not divisible by (q - zeta) in {field.name}", code="remainder"
            )
        value = field.zero()
        for c in quotient:
            value = value * zeta + c
        return value * zeta ** (low % field.ell)

    def format(self):
        if not self.terms:
            return "0"
        pieces = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            sign = "-" if c < 0 else "+"
            c = abs(c)
            power = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not power:
                body = str(c)
            elif c == 1:
                body = power
            else:
                body = f"{c}*{power}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    __str__ = format


class QuantumAffineSpace:
    def __init__(self, n):
        if n < 1:
            raise InputError("quantum affine space needs at least one generator")
        self.n = n

    def element(self, terms):
        return {tuple(exp): c for exp, c in terms.items() if c}

    def gen(self, i):
        if not 0 <= i < self.n:
            raise InputError(f"generator index {i} out of range for n = {self.n}")
        return self.monomial(tuple(1 if k == i else 0 for k in range(self.n)))

    def monomial(self, exp):
        if len(exp) != self.n:
            raise InputError(f"exponent {exp} has the wrong length for n = {self.n}")
        return {tuple(exp): LaurentPolynomial({0: 1})}

    def power(self, u, k):
        out = self.monomial((0,) * self.n)
        for _ in range(k):
            out = q_mul(out, u, self)
        return out

    def format(self, u):
        if not u:
            return "0"
        pieces = []
        for exp in sorted(u, reverse=True):
            word = "*".join(
                f"X_{i + 1}" if e == 1 else f"X_{i + 1}^{e}" for i, e in enumerate(exp) if e
            ) or "1"
            pieces.append(f"({u[exp].format()})*{word}")
        return " + ".join(pieces)


def q_mul(u, v, Q):
    out = {}
    for a, c in u.items():
        for b, d in v.items():
            twist = sum(b[i] * a[j] for i in range(Q.n) for j in range(i + 1, Q.n))
            exp = tuple(x + y for x, y in zip(a, b))
            out[exp] = out.get(exp, LaurentPolynomial()) + c * d * LaurentPolynomial.q_power(twist)
    return {exp: c for exp, c in out.items() if c}


def q_commutator(u, v, Q):
    out = dict(q_mul(u, v, Q))
    for exp, c in q_mul(v, u, Q).items():
        out[exp] = out.get(exp, LaurentPolynomial()) - c
    return {exp: c for exp, c in out.items() if c}


def _check_ell(ell):
    if ell < 2:
        raise InputError(f"the root of unity order must be at least 2, got {ell}", code="ell")
    if ell > config.MAX_ELL:
        raise InputError(f"ell = {ell} exceeds the configured maximum {config.MAX_ELL}", code="ell")


def centre_ring(Q, ell):
    field = CoefficientField.cyclotomic(ell)
    return PolynomialRing(tuple(f"u_{i + 1}" for i in range(Q.n)), field)


def semiclassical_bracket(u, v, Q, ell, ring=None):
    """{u, v} for u, v in the span of the X^(l*alpha), as a polynomial in u_1..u_n."""
    ring = ring or centre_ring(Q, ell)
    total = ring.zero()
    for exp, c in q_commutator(u, v, Q).items():
        if any(e % ell for e in exp):
            raise InputError(f"X^{exp} is not an l-th power monomial for l = {ell}")
        value = c.divide_at(ring.field)
        if value:
            total = total + ring.monomial(tuple(e // ell for e in exp)) * value
    return total


def ell_centre_bracket(Q, ell):
    """The Poisson algebra on u_i = X_i^l with the semiclassical bracket."""
    _check_ell(ell)
    ring = centre_ring(Q, ell)
    powers = [Q.power(Q.gen(i), ell) for i in range(Q.n)]
    entries = {}
    for i in range(Q.n):
        for j in range(i + 1, Q.n):
            entries[(i, j)] = semiclassical_bracket(powers[i], powers[j], Q, ell, ring)
    P = PoissonAlgebra.from_upper(ring, entries)
    if not jacobi_check(P).ok:
        raise InternalInvariantError("semiclassical bracket fails Jacobi", code="jacobi")
    logger.info("✅ l-centre bracket for n = %d, l = %d", Q.n, ell)
    return P


@dataclass(frozen=True)
class CentralityReport:
    ok: bool
    specialized: bool
    failures: tuple = ()

    def to_dict(self):
        return {
            "ok": self.ok,
            "specialized": self.specialized,
            "failures": [{"pair": [i, j], "coefficient": str(c)} for i, j, c in self.failures],
        }


def centrality_check(Q, ell, specialize=True):
    """[X_i^l, X_j] = 0 for all i, j, at q = zeta_l or for generic q."""
    _check_ell(ell)
    field = CoefficientField.cyclotomic(ell)
    failures = []
    for i in range(Q.n):
        power = Q.power(Q.gen(i), ell)
        for j in range(Q.n):
            for exp, c in q_commutator(power, Q.gen(j), Q).items():
                value = c.evaluate(field) if specialize else c
                if value:
                    failures.append((i, j, value))
    return CentralityReport(not failures, specialize, tuple(failures))
