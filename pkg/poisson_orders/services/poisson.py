"""Poisson brackets on polynomial rings.

A PoissonAlgebra is a ring plus the antisymmetric table B[i][j] = {x_i, x_j};
the bracket of arbitrary polynomials is the biderivation extension
{f, g} = sum_{i<j} B[i][j] (d_i f d_j g - d_j f d_i g).
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations

from services.errors import InputError, ValidationFailure
from services.field import CoefficientField
from services.groebner import divide_exact, normal_form
from services.linalg import nullspace, rank, rref
from services.poly import Polynomial, PolynomialRing

logger = logging.getLogger(__name__)


class PoissonAlgebra:
    __slots__ = ("ring", "table")

    def __init__(self, ring, table):
        n = ring.nvars
        rows = [tuple(ring.coerce(p) for p in row) for row in table]
        if len(rows) != n or any(len(row) != n for row in rows):
            raise InputError(f"bracket table must be {n}x{n}")
        for i in range(n):
            if rows[i][i]:
                raise ValidationFailure(
                    f"{{{ring.variables[i]}, {ring.variables[i]}}} must be 0", code="antisymmetry", i=i, j=i
                )
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ValidationFailure(
                        f"bracket table is not antisymmetric at ({ring.variables[i]}, {ring.variables[j]})",
                        code="antisymmetry",
                        i=i,
                        j=j,
                    )
        self.ring = ring
        self.table = tuple(rows)

    @classmethod
    def from_upper(cls, ring, entries):
        """Build from {(i, j): polynomial} with i < j; unlisted entries are 0."""
        n = ring.nvars
        table = [[ring.zero()] * n for _ in range(n)]
        for (i, j), value in entries.items():
            if not 0 <= i < j < n:
                raise InputError(f"bracket entry ({i}, {j}) is not strictly upper triangular")
            value = ring.coerce(value)
            table[i][j] = value
            table[j][i] = -value
        return cls(ring, table)

    @classmethod
    def trivial(cls, ring):
        return cls.from_upper(ring, {})

    @property
    def nvars(self):
        return self.ring.nvars

    @property
    def variables(self):
        return self.ring.variables

    def with_ring(self, ring):
        return PoissonAlgebra(ring, [[p.with_ring(ring) for p in row] for row in self.table])

    def max_entry_degree(self):
        return max((p.degree() for row in self.table for p in row), default=-1)

    def upper_entries(self):
        n = self.nvars
        return {(i, j): self.table[i][j] for i in range(n) for j in range(i + 1, n) if self.table[i][j]}

    def __eq__(self, other):
        if not isinstance(other, PoissonAlgebra):
            return NotImplemented
        return self.ring.same_space(other.ring) and self.table == other.table

    __hash__ = None

    def __repr__(self):
        entries = ", ".join(
            f"{{{self.variables[i]},{self.variables[j]}}}={p}" for (i, j), p in self.upper_entries().items()
        )
        return f"PoissonAlgebra({', '.join(self.variables)}; {entries})"


def bracket(f, g, P):
    ring = P.ring
    f, g = ring.coerce(f), ring.coerce(g)
    if not f or not g:
        return ring.zero()
    df, dg = f.gradient(), g.gradient()
    total = ring.zero()
    for (i, j), b in P.upper_entries().items():
        cross = df[i] * dg[j] - df[j] * dg[i]
        if cross:
            total = total + b * cross
    return total


def jacobiator(f, g, h, P):
    return bracket(f, bracket(g, h, P), P) + bracket(g, bracket(h, f, P), P) + bracket(h, bracket(f, g, P), P)


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    violations: tuple = ()

    def to_dict(self):
        return {
            "ok": self.ok,
            "violations": [
                {"triple": [i, j, k], "defect": str(defect)} for i, j, k, defect in self.violations
            ],
        }


def jacobi_check(P):
    """Jacobi identity on every generator triple i < j < k."""
    gens = P.ring.gens()
    violations = []
    for i, j, k in combinations(range(P.nvars), 3):
        defect = jacobiator(gens[i], gens[j], gens[k], P)
        if defect:
            violations.append((i, j, k, defect))
    if violations:
        logger.info("❌ Jacobi fails on %d triple(s)", len(violations))
    return JacobiReport(not violations, tuple(violations))


def hamiltonian(z, P):
    """H(z) as its component vector ({z, x_1}, ..., {z, x_n})."""
    return tuple(bracket(z, x, P) for x in P.ring.gens())


def apply_derivation(derivation, g):
    total = g.ring.zero()
    for i, component in enumerate(derivation):
        if component:
            total = total + component * g.derivative(i)
    return total


def poisson_centre(P, degree_bound):
    """Basis of the Casimirs of degree <= degree_bound, in reduced echelon form."""
    if degree_bound < 0:
        raise InputError("degree bound must be non-negative")
    ring = P.ring
    monomials = ring.monomials(degree_bound)
    gens = ring.gens()
    images = [[bracket(ring.monomial(m), x, P) for x in gens] for m in monomials]
    row_index = {}
    for per_monomial in images:
        for i, image in enumerate(per_monomial):
            for exp in image.terms:
                row_index.setdefault((i, exp), len(row_index))
    zero, one = ring.field.zero(), ring.field.one()
    matrix = [[zero] * len(monomials) for _ in range(len(row_index))]
    for col, per_monomial in enumerate(images):
        for i, image in enumerate(per_monomial):
            for exp, c in image.terms.items():
                matrix[row_index[(i, exp)]][col] = c
    kernel = nullspace(matrix, len(monomials), zero, one)
    reduced, _ = rref(kernel, len(monomials))
    return [Polynomial.from_terms(ring, {m: c for m, c in zip(monomials, row) if c}) for row in reduced]


def leaf_rank(P, point):
    if len(point) != P.nvars:
        raise InputError(f"point has {len(point)} coordinates, algebra has {P.nvars} variables")
    matrix = [[p.evaluate(point) for p in row] for row in P.table]
    return rank(matrix, P.nvars)


def lie_poisson(constants, variables, coefficients=None):
    """C[g*] for structure constants c[i][j][k] with [x_i, x_j] = sum_k c[i][j][k] x_k."""
    ring = PolynomialRing(tuple(variables), coefficients or CoefficientField.rationals())
    n = ring.nvars
    if len(constants) != n or any(len(row) != n or any(len(c) != n for c in row) for row in constants):
        raise InputError(f"structure constants must have shape {n}x{n}x{n}")
    gens = ring.gens()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if constants[i][j][k] != -constants[j][i][k]:
                    raise InputError(f"structure constants are not antisymmetric at ({i}, {j})")
    entries = {}
    for i, j in combinations(range(n), 2):
        value = ring.zero()
        for k in range(n):
            if constants[i][j][k]:
                value = value + gens[k] * constants[i][j][k]
        entries[(i, j)] = value
    P = PoissonAlgebra.from_upper(ring, entries)
    report = jacobi_check(P)
    if not report.ok:
        i, j, k, defect = report.violations[0]
        raise ValidationFailure(
            f"structure constants violate Jacobi on ({variables[i]}, {variables[j]}, {variables[k]}): {defect}",
            code="jacobi",
            triple=[i, j, k],
            defect=defect,
        )
    return P


def structure_constants(P):
    """Recover c[i][j][k] from a bracket table whose entries are linear forms."""
    n = P.nvars
    zero = P.ring.field.zero()
    constants = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            entry = P.table[i][j]
            for exp, c in entry.terms.items():
                if sum(exp) != 1:
                    raise InputError(
                        f"{{{P.variables[i]}, {P.variables[j]}}} = {entry} is not a linear form"
                    )
                constants[i][j][exp.index(1)] = c
    return constants


LIE_ALGEBRAS = {
    "abelian": (("x", "y", "z"), {}),
    "heisenberg": (("x", "y", "z"), {(0, 1): {2: 1}}),
    "sl2": (("e", "h", "f"), {(1, 0): {0: 2}, (1, 2): {2: -2}, (0, 2): {1: 1}}),
    "solvable": (("x", "y"), {(0, 1): {1: 1}}),
}


def named_lie_algebra(name):
    """(variables, structure constants) of one of the example Lie algebras."""
    try:
        variables, brackets = LIE_ALGEBRAS[name]
    except KeyError:
        raise InputError(f"unknown Lie algebra {name!r}; known: {', '.join(sorted(LIE_ALGEBRAS))}") from None
    n = len(variables)
    constants = [[[0] * n for _ in range(n)] for _ in range(n)]
    for (i, j), image in brackets.items():
        for k, c in image.items():
            constants[i][j][k] = c
            constants[j][i][k] = -c
    return variables, constants


@dataclass(frozen=True)
class LocalFraction:
    """p / s^k, stored with the largest possible power of s cancelled."""

    numerator: object
    power: int
    algebra: "LocalizedPoissonAlgebra" = field(repr=False, compare=False)

    def _common(self, other):
        if not isinstance(other, LocalFraction):
            other = self.algebra.element(other)
        top = max(self.power, other.power)
        s = self.algebra.denominator
        return self.numerator * s ** (top - self.power), other.numerator * s ** (top - other.power), top

    def __add__(self, other):
        a, b, k = self._common(other)
        return self.algebra.fraction(a + b, k)

    def __sub__(self, other):
        a, b, k = self._common(other)
        return self.algebra.fraction(a - b, k)

    def __neg__(self):
        return self.algebra.fraction(-self.numerator, self.power)

    def __mul__(self, other):
        if not isinstance(other, LocalFraction):
            other = self.algebra.element(other)
        return self.algebra.fraction(self.numerator * other.numerator, self.power + other.power)

    def __eq__(self, other):
        if not isinstance(other, LocalFraction):
            other = self.algebra.element(other)
        a, b, _ = self._common(other)
        return a == b

    def __hash__(self):
        return hash((self.numerator, self.power))

    def format(self):
        if not self.power:
            return self.numerator.format()
        s = self.algebra.denominator.format()
        power = f"^{self.power}" if self.power > 1 else ""
        return f"({self.numerator.format()})/({s}){power}"

    __str__ = format


class LocalizedPoissonAlgebra:
    """Z[s^-1] with the unique extension of the bracket."""

    def __init__(self, base, denominator):
        denominator = base.ring.coerce(denominator)
        if not denominator:
            raise InputError("cannot localize at the zero polynomial")
        self.base = base
        self.denominator = denominator

    def fraction(self, numerator, power=0):
        numerator = self.base.ring.coerce(numerator)
        s = self.denominator
        if not numerator:
            return LocalFraction(numerator, 0, self)
        if s.is_constant():
            return LocalFraction(numerator / s.constant_value() ** power, 0, self)
        while power > 0 and not normal_form(numerator, [s]):
            numerator = divide_exact(numerator, s)
            power -= 1
        return LocalFraction(numerator, power, self)

    def element(self, value):
        if isinstance(value, LocalFraction):
            return value
        return self.fraction(value, 0)

    def inverse_denominator(self, power=1):
        return self.fraction(self.base.ring.one(), power)

    def bracket(self, a, b):
        """{p/s^k, q/s^l} = (s{p,q} - l q{p,s} - k p{s,q}) / s^(k+l+1)."""
        a, b = self.element(a), self.element(b)
        p, k, q, l = a.numerator, a.power, b.numerator, b.power
        P, s = self.base, self.denominator
        top = s * bracket(p, q, P)
        if l:
            top = top - q * bracket(p, s, P) * l
        if k:
            top = top - p * bracket(s, q, P) * k
        return self.fraction(top, k + l + 1)


def localize(P, s):
    return LocalizedPoissonAlgebra(P, s)
