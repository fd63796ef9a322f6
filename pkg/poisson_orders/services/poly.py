"""Multivariate polynomials with exact coefficients, monomial orders and the
canonical text syntax (``3/2*x^2*y - 1``).

The expression grammar is shared with the enveloping algebra: it also knows
``d[x]`` tokens, which polynomial parsing rejects.
"""
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations_with_replacement

import pyparsing as pp

from services.errors import InputError
from services.field import CoefficientField, CyclotomicNumber

logger = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()

_INTEGER = pp.Regex(r"\d+")
_DELTA = pp.Regex(r"d\[[A-Za-z_][A-Za-z_0-9]*\]")
_NAME = pp.Regex(r"[A-Za-z_][A-Za-z_0-9]*")
EXPRESSION = pp.infix_notation(
    _DELTA | _INTEGER | _NAME,
    [
        (pp.Literal("^"), 2, pp.OpAssoc.RIGHT),
        (pp.one_of("+ -"), 1, pp.OpAssoc.RIGHT),
        (pp.one_of("* /"), 2, pp.OpAssoc.LEFT),
        (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT),
    ],
)


def parse_expression(text, resolve, number, divide=None):
    """Parse ``text`` and evaluate it with the caller's arithmetic.

    ``resolve`` maps identifiers (and ``d[x]`` tokens) to values, ``number``
    turns integer literals into values, ``divide`` handles ``a / b``.
    Values only need ``+``, ``-``, ``*`` and unary minus.
    """
    source = str(text).replace("**", "^").strip()
    if not source:
        raise InputError("empty expression", code="syntax", line=1, column=1)
    try:
        parsed = EXPRESSION.parse_string(source, parse_all=True)
    except pp.ParseBaseException as exc:
        raise InputError(
            f"cannot parse {source!r}: {exc.msg}", code="syntax", line=exc.lineno, column=exc.col
        ) from None
    return _evaluate(parsed[0], resolve, number, divide or _default_divide)


def _default_divide(a, b):
    return a / b


def _evaluate(node, resolve, number, divide):
    if isinstance(node, str):
        return number(int(node)) if node.isdigit() else resolve(node)
    items = list(node)
    if len(items) == 2 and isinstance(items[0], str) and items[0] in ("+", "-"):
        value = _evaluate(items[1], resolve, number, divide)
        return -value if items[0] == "-" else value
    if items[1] == "^":
        exponent = _exponent(items[-1])
        for item in reversed(items[2:-1:2]):
            exponent = _exponent(item) ** exponent
        base = _evaluate(items[0], resolve, number, divide)
        if exponent < 0:
            raise InputError("negative exponents are not allowed", code="syntax")
        result = number(1)
        for _ in range(exponent):
            result = result * base
        return result
    acc = _evaluate(items[0], resolve, number, divide)
    for op, operand in zip(items[1::2], items[2::2]):
        value = _evaluate(operand, resolve, number, divide)
        if op == "+":
            acc = acc + value
        elif op == "-":
            acc = acc - value
        elif op == "*":
            acc = acc * value
        else:
            acc = divide(acc, value)
    return acc


def _exponent(node):
    if isinstance(node, str) and node.isdigit():
        return int(node)
    raise InputError("exponents must be non-negative integer literals", code="syntax")


def _degrevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


@dataclass(frozen=True)
class MonomialOrder:
    """``degrevlex``, ``deglex``, ``lex`` or ``block`` (degrevlex inside each block)."""

    name: str = "degrevlex"
    blocks: tuple = ()

    @classmethod
    def from_name(cls, text):
        label = (text or "degrevlex").strip().lower()
        if label in ("degrevlex", "grevlex", "lex", "deglex", "grlex"):
            return cls({"grevlex": "degrevlex", "grlex": "deglex"}.get(label, label))
        if label.startswith("block:"):
            try:
                sizes = tuple(int(part) for part in label[len("block:"):].split(","))
            except ValueError:
                raise InputError(f"bad block order: {text!r}") from None
            if not sizes or any(size <= 0 for size in sizes):
                raise InputError(f"bad block order: {text!r}")
            return cls("block", sizes)
        raise InputError(f"unknown monomial order: {text!r}")

    @property
    def label(self):
        if self.name == "block":
            return "block:" + ",".join(str(size) for size in self.blocks)
        return self.name

    def key(self, exp):
        """Sort key; larger keys are larger monomials."""
        if self.name == "degrevlex":
            return _degrevlex_key(exp)
        if self.name == "lex":
            return tuple(exp)
        if self.name == "deglex":
            return (sum(exp), tuple(exp))
        keys, start = [], 0
        for size in self.blocks:
            keys.append(_degrevlex_key(exp[start:start + size]))
            start += size
        return tuple(keys)

    def eliminates(self, indices):
        """True when the order is an elimination order for the variables at ``indices``."""
        wanted = set(indices)
        if self.name == "lex":
            return wanted == set(range(len(wanted)))
        if self.name == "block":
            covered = 0
            for size in self.blocks:
                if wanted == set(range(covered)):
                    return True
                covered += size
            return wanted == set(range(covered))
        return not wanted


@dataclass(frozen=True)
class PolynomialRing:
    variables: tuple
    field: CoefficientField = dc_field(default_factory=CoefficientField.rationals)
    order: MonomialOrder = dc_field(default_factory=MonomialOrder)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise InputError(f"duplicate variable names in {self.variables}")
        for name in self.variables:
            if not _NAME.matches(name) or name == "zeta":
                raise InputError(f"bad variable name: {name!r}")
        if self.order.name == "block" and sum(self.order.blocks) != len(self.variables):
            raise InputError(
                f"block order {self.order.label} does not cover {len(self.variables)} variables"
            )

    @property
    def nvars(self):
        return len(self.variables)

    def index(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r} (ring has {', '.join(self.variables)})") from None

    def with_order(self, order):
        if isinstance(order, str):
            order = MonomialOrder.from_name(order)
        return PolynomialRing(self.variables, self.field, order)

    def same_space(self, other):
        return self.variables == other.variables and self.field == other.field

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, value):
        return Polynomial.from_terms(self, {(0,) * self.nvars: value})

    def monomial(self, exp, coeff=1):
        return Polynomial.from_terms(self, {tuple(exp): coeff})

    def gen(self, which):
        i = which if isinstance(which, int) else self.index(which)
        exp = [0] * self.nvars
        exp[i] = 1
        return self.monomial(exp)

    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def monomials(self, max_degree):
        """All exponent vectors of total degree <= max_degree, largest first."""
        result = []
        for degree in range(max_degree + 1):
            for combo in combinations_with_replacement(range(self.nvars), degree):
                exp = [0] * self.nvars
                for i in combo:
                    exp[i] += 1
                result.append(tuple(exp))
        result.sort(key=self.order.key, reverse=True)
        return result

    def coerce(self, value):
        if isinstance(value, Polynomial):
            if not self.same_space(value.ring):
                raise InputError("mixed variable sets or coefficient fields")
            return value if value.ring == self else Polynomial(self, value.terms)
        if isinstance(value, str):
            return self.parse(value)
        return self.constant(value)

    def parse(self, text):
        def resolve(name):
            if name in self.variables:
                return self.gen(name)
            if name == "zeta" and not self.field.is_rational:
                return self.constant(self.field.zeta())
            raise InputError(f"unknown symbol {name!r} in {text!r}", code="syntax")

        def divide(a, b):
            if not b.is_constant() or not b:
                raise InputError(f"can only divide by nonzero constants in {text!r}", code="syntax")
            return a * self.field.one() / b.constant_value()

        return parse_expression(text, resolve, self.constant, divide)


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring, terms):
        coerce = ring.field.coerce
        cleaned = {}
        for exp, coeff in terms.items():
            value = coerce(coeff)
            if value:
                cleaned[tuple(exp)] = value
        return cls(ring, cleaned)

    def _other(self, other):
        if isinstance(other, Polynomial):
            if not self.ring.same_space(other.ring):
                raise InputError(
                    f"mixed rings: {self.ring.variables}/{self.ring.field.name} "
                    f"vs {other.ring.variables}/{other.ring.field.name}"
                )
            return other
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.ring.constant(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            value = terms.get(exp, 0) + coeff
            if value:
                terms[exp] = value
            else:
                terms.pop(exp, None)
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {exp: -coeff for exp, coeff in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.scale(other)
        other = self._other(other)
        if other is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                value = terms.get(exp, 0) + c1 * c2
                if value:
                    terms[exp] = value
                else:
                    terms.pop(exp, None)
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def scale(self, factor):
        factor = self.ring.field.coerce(factor)
        if not factor:
            return self.ring.zero()
        return Polynomial(self.ring, {exp: coeff * factor for exp, coeff in self.terms.items()})

    def shift(self, exp):
        """Multiply by the monomial x^exp."""
        return Polynomial(
            self.ring, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}
        )

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant() or not other:
                raise InputError("polynomial division needs a nonzero constant divisor")
            other = other.constant_value()
        return self.scale(self.ring.field.one() / self.ring.field.coerce(other))

    def __pow__(self, exponent):
        if exponent < 0:
            raise InputError("negative polynomial power")
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.same_space(other.ring) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    def is_constant(self):
        return all(not any(exp) for exp in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero())

    def degree(self):
        return max((sum(exp) for exp in self.terms), default=-1)

    def min_degree(self):
        return min((sum(exp) for exp in self.terms), default=-1)

    def sorted_terms(self):
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda item: key(item[0]), reverse=True)

    def leading_monomial(self):
        return max(self.terms, key=self.ring.order.key) if self.terms else None

    def leading_coefficient(self):
        lm = self.leading_monomial()
        return self.terms[lm] if lm is not None else self.ring.field.zero()

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.ring.field.one() / self.leading_coefficient())

    def derivative(self, which):
        i = which if isinstance(which, int) else self.ring.index(which)
        terms = {}
        for exp, coeff in self.terms.items():
            if exp[i]:
                lowered = list(exp)
                lowered[i] -= 1
                terms[tuple(lowered)] = coeff * exp[i]
        return Polynomial(self.ring, terms)

    def gradient(self):
        return [self.derivative(i) for i in range(self.ring.nvars)]

    def evaluate(self, point):
        values = [self.ring.field.coerce(v) for v in point]
        if len(values) != self.ring.nvars:
            raise InputError(f"point has {len(values)} coordinates, ring has {self.ring.nvars} variables")
        total = self.ring.field.zero()
        for exp, coeff in self.terms.items():
            term = coeff
            for value, power in zip(values, exp):
                if power:
                    term = term * value ** power
            total = total + term
        return total

    def with_ring(self, ring):
        """Same terms viewed in ``ring`` (same variables and field, any order)."""
        if not self.ring.same_space(ring):
            raise InputError("with_ring needs the same variables and field")
        return Polynomial(ring, self.terms)

    def embed(self, ring, positions):
        """Map variable i of this ring to variable ``positions[i]`` of ``ring``."""
        terms = {}
        for exp, coeff in self.terms.items():
            target = [0] * ring.nvars
            for i, power in enumerate(exp):
                target[positions[i]] += power
            terms[tuple(target)] = coeff
        return Polynomial(ring, terms)

    def uses_only(self, indices):
        allowed = set(indices)
        return all(i in allowed for exp in self.terms for i, power in enumerate(exp) if power)

    def format(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        pieces = []
        for exp, coeff in self.sorted_terms():
            mono = "*".join(
                name if power == 1 else f"{name}^{power}" for name, power in zip(names, exp) if power
            )
            pieces.append(_format_term(coeff, mono))
        text = pieces[0]
        for piece in pieces[1:]:
            text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return text

    __str__ = format

    def __repr__(self):
        return f"Polynomial({self.format()!r})"


def _format_term(coeff, mono):
    if isinstance(coeff, CyclotomicNumber):
        if not coeff.is_rational():
            body = f"({coeff.format()})"
            return f"{body}*{mono}" if mono else body
        coeff = coeff.coeffs[0]
    if not mono:
        return str(coeff)
    if coeff == 1:
        return mono
    if coeff == -1:
        return f"-{mono}"
    return f"{coeff}*{mono}"
