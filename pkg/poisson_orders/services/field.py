"""Exact coefficient fields: the rationals and cyclotomic fields Q(zeta_ell).

Rational coefficients are plain ``fractions.Fraction`` values. Cyclotomic
coefficients are residues modulo the ell-th cyclotomic polynomial, reduced
eagerly so that equal numbers always have equal representations.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy import Poly, Symbol, cyclotomic_poly

from services.errors import InputError


@dataclass(frozen=True)
class CoefficientField:
    kind: str = "rationals"
    ell: int = 1

    @classmethod
    def rationals(cls):
        return cls("rationals", 1)

    @classmethod
    def cyclotomic(cls, ell):
        if int(ell) < 1:
            raise InputError(f"cyclotomic field needs ell >= 1, got {ell}")
        return cls("cyclotomic", int(ell))

    @classmethod
    def from_name(cls, name):
        """Parse ``rationals`` / ``QQ`` / ``cyclotomic:<ell>``."""
        text = (name or "rationals").strip().lower()
        if text in ("rationals", "qq", "q"):
            return cls.rationals()
        if text.startswith("cyclotomic"):
            _, _, ell = text.partition(":")
            try:
                return cls.cyclotomic(int(ell))
            except ValueError:
                raise InputError(f"bad cyclotomic field name: {name!r}") from None
        raise InputError(f"unknown coefficient field: {name!r}")

    @property
    def name(self):
        return "rationals" if self.is_rational else f"cyclotomic:{self.ell}"

    @property
    def is_rational(self):
        return self.kind == "rationals"

    @cached_property
    def modulus(self):
        """Coefficients of Phi_ell, lowest degree first (monic)."""
        t = Symbol("t")
        coeffs = Poly(cyclotomic_poly(self.ell, t), t).all_coeffs()
        return tuple(Fraction(int(c)) for c in reversed(coeffs))

    @property
    def degree(self):
        return 1 if self.is_rational else len(self.modulus) - 1

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def zeta(self):
        if self.is_rational:
            raise InputError("the rationals have no distinguished root of unity")
        return CyclotomicNumber(self, (Fraction(0), Fraction(1)))

    def coerce(self, value):
        if self.is_rational:
            if isinstance(value, CyclotomicNumber):
                if not value.is_rational():
                    raise InputError(f"{value} is not a rational number")
                return value.coeffs[0]
            return Fraction(value)
        if isinstance(value, CyclotomicNumber):
            if value.field != self:
                raise InputError(f"cannot mix {value.field.name} and {self.name} coefficients")
            return value
        return CyclotomicNumber(self, (Fraction(value),))

    def format(self, value):
        if isinstance(value, CyclotomicNumber):
            return value.format()
        return str(value)


def _reduce(coeffs, modulus):
    work = [Fraction(c) for c in coeffs]
    degree = len(modulus) - 1
    for k in range(len(work) - 1, degree - 1, -1):
        lead = work[k]
        if lead:
            for t in range(degree + 1):
                work[k - degree + t] -= lead * modulus[t]
    work = work[:degree]
    return tuple(work + [Fraction(0)] * (degree - len(work)))


def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _divmod(a, b):
    a, b = _trim(a), _trim(b)
    quotient = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = a[-1] / b[-1]
        quotient[shift] = factor
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        a = _trim(a)
    return quotient, a


def _sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim(x - y for x, y in zip(a, b))


def _mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


class CyclotomicNumber:
    """An element of Q[t]/(Phi_ell), printed as a polynomial in ``zeta``."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = _reduce(coeffs, field.modulus)

    def _lift(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.field != self.field:
                raise InputError(f"cannot mix {other.field.name} and {self.field.name} coefficients")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.field, (Fraction(other),))
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber(self.field, _mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("cyclotomic zero has no inverse")
        r0, r1 = list(self.field.modulus), _trim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _sub(s0, _mul(q, s1))
        # r0 is a nonzero constant because Phi_ell is irreducible
        return CyclotomicNumber(self.field, tuple(c / r0[0] for c in s0))

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        exponent = int(exponent)
        base = self if exponent >= 0 else self.inverse()
        result = CyclotomicNumber(self.field, (Fraction(1),))
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber) and other.field != self.field:
            return False
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.ell, self.coeffs))

    def is_rational(self):
        return not any(self.coeffs[1:])

    def format(self):
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if not c:
                continue
            if power == 0:
                body, magnitude = str(abs(c)), None
            else:
                body = "zeta" if power == 1 else f"zeta^{power}"
                magnitude = abs(c)
                if magnitude != 1:
                    body = f"{magnitude}*{body}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"CyclotomicNumber({self.format()!r}, ell={self.field.ell})"

    __str__ = format
