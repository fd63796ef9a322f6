"""Finite-dimensional Poisson modules, their annihilators and torsion ideals.

Matrices are numpy object arrays of exact field elements; column s is the
image of the basis vector v_s.
"""
import logging
from dataclasses import dataclass
from itertools import product

import numpy as np

from services import config
from services.envelope import Envelope, delta_of
from services.errors import InputError
from services.groebner import Ideal, groebner_basis, ideal_contains, ideal_equal, krull_dimension, quotient_dimension
from services.ideals import poisson_core
from services.linalg import nullspace, rank, rref
from services.order import PoissonOrder, algebra_as_order
from services.poisson import PoissonAlgebra, apply_derivation, hamiltonian
from services.poly import Polynomial

logger = logging.getLogger(__name__)


def to_matrix(rows, field, size):
    if size == 0:
        return np.empty((0, 0), dtype=object)
    matrix = np.empty((size, size), dtype=object)
    if len(rows) != size or any(len(row) != size for row in rows):
        raise InputError(f"expected a {size}x{size} matrix")
    for r, row in enumerate(rows):
        for c, value in enumerate(row):
            matrix[r, c] = field.coerce(value)
    return matrix


def identity(field, size):
    return to_matrix([[1 if r == c else 0 for c in range(size)] for r in range(size)], field, size)


def zeros(field, size):
    return to_matrix([[0] * size for _ in range(size)], field, size)


def is_zero(matrix):
    return all(not value for value in matrix.flat)


def same(a, b):
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def format_matrix(matrix, field):
    return [[field.format(value) for value in row] for row in matrix]


class PoissonModule:
    """X[i]: action of x_i, D[i]: action of nabla(x_i), E[j]: action of the A-basis."""

    def __init__(self, field, dim, X, D, E=None):
        self.field = field
        self.dim = dim
        self.X = tuple(to_matrix(m, field, dim) if not isinstance(m, np.ndarray) else m for m in X)
        self.D = tuple(to_matrix(m, field, dim) if not isinstance(m, np.ndarray) else m for m in D)
        if len(self.X) != len(self.D):
            raise InputError(f"{len(self.X)} X matrices but {len(self.D)} D matrices")
        self.E = None if E is None else tuple(to_matrix(m, field, dim) if not isinstance(m, np.ndarray) else m for m in E)

    @property
    def nvars(self):
        return len(self.X)

    def basis_action(self, order):
        if self.E is not None:
            if len(self.E) != order.rank:
                raise InputError(f"module has {len(self.E)} basis matrices, order has rank {order.rank}")
            return self.E
        if order.rank != 1:
            raise InputError("a module over an order of rank > 1 needs basis matrices")
        return (identity(self.field, self.dim),)

    def __repr__(self):
        return f"PoissonModule(dim={self.dim}, nvars={self.nvars})"


def _power_cache(M):
    cache = {}

    def power(exp):
        if exp not in cache:
            if not any(exp):
                cache[exp] = identity(M.field, M.dim)
            else:
                i = next(k for k, e in enumerate(exp) if e)
                lower = list(exp)
                lower[i] -= 1
                cache[exp] = M.X[i] @ power(tuple(lower))
        return cache[exp]

    return power


def evaluate(p, M, power=None):
    """p(X_1, ..., X_n)."""
    power = power or _power_cache(M)
    out = zeros(M.field, M.dim)
    for exp, c in p.terms.items():
        out = out + power(exp) * c
    return out


def evaluate_element(a, M, order, power=None):
    """An order element sum_j a_j e_j acting on M."""
    power = power or _power_cache(M)
    E = M.basis_action(order)
    out = zeros(M.field, M.dim)
    for j, coord in enumerate(a):
        if coord:
            out = out + evaluate(coord, M, power) @ E[j]
    return out


def env_action(u, M):
    """An EnvElement acting on M: A-part, then X^alpha, then D powers in variable order."""
    env = u.envelope
    E = M.basis_action(env.order)
    power = _power_cache(M)
    out = zeros(M.field, M.dim)
    for (j, alpha, b), c in u.terms.items():
        term = E[j] @ power(alpha)
        for i, k in enumerate(b):
            for _ in range(k):
                term = term @ M.D[i]
        out = out + term * c
    return out


@dataclass(frozen=True)
class ModuleViolation:
    axiom: str
    indices: tuple

    def to_dict(self):
        return {"axiom": self.axiom, "indices": list(self.indices)}


@dataclass(frozen=True)
class ModuleReport:
    ok: bool
    violations: tuple = ()

    def to_dict(self):
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def module_check(M, A):
    """Module axioms (i)-(iii) plus commutation of X and the order relations."""
    order = algebra_as_order(A) if isinstance(A, PoissonAlgebra) else A
    P = order.base
    n = P.nvars
    if M.nvars != n:
        raise InputError(f"module has {M.nvars} generator matrices, algebra has {n} variables")
    power = _power_cache(M)
    E = M.basis_action(order)
    violations = []

    def commutator(a, b):
        return a @ b - b @ a

    for i in range(n):
        for k in range(i + 1, n):
            if not is_zero(commutator(M.X[i], M.X[k])):
                violations.append(ModuleViolation("commute", (i, k)))
    if M.E is not None:
        if not same(evaluate_element(order.unit, M, order, power), identity(M.field, M.dim)):
            violations.append(ModuleViolation("unit", ()))
        for j in range(order.rank):
            for k in range(order.rank):
                if not same(E[j] @ E[k], evaluate_element(order.mult[j][k], M, order, power)):
                    violations.append(ModuleViolation("mult", (j, k)))
            for i in range(n):
                if not is_zero(commutator(E[j], M.X[i])):
                    violations.append(ModuleViolation("central", (j, i)))

    env = Envelope(order)
    gens = P.ring.gens()
    for i in range(n):
        for k in range(i, n):
            lhs = env_action(delta_of(gens[i] * gens[k], env), M)
            rhs = M.X[i] @ M.D[k] + M.X[k] @ M.D[i]
            if not same(lhs, rhs):
                violations.append(ModuleViolation("leibniz", (i, k)))

    for i in range(n):
        for j in range(order.rank):
            expected = evaluate_element(order.delta(i, order.basis_element(j)), M, order, power)
            if not same(commutator(M.D[i], E[j]), expected):
                violations.append(ModuleViolation("hamiltonian", (i, "basis", j)))
        for k in range(n):
            expected = evaluate(P.table[i][k], M, power)
            if not same(commutator(M.D[i], M.X[k]), expected):
                violations.append(ModuleViolation("hamiltonian", (i, "variable", k)))

    for i in range(n):
        for j in range(i + 1, n):
            expected = zeros(M.field, M.dim)
            for k in range(n):
                dk = P.table[i][j].derivative(k)
                if dk:
                    expected = expected + evaluate(dk, M, power) @ M.D[k]
            if not same(commutator(M.D[i], M.D[j]), expected):
                violations.append(ModuleViolation("bracket", (i, j)))

    if violations:
        logger.info("❌ module fails %d axiom check(s)", len(violations))
    return ModuleReport(not violations, tuple(violations))


def matrix_algebra_dimension(M):
    """dim of the algebra generated by the X matrices."""
    if M.dim == 0:
        return 0
    power = _power_cache(M)
    ncols = M.dim * M.dim
    vectors, current, degree = [], 0, 0
    while True:
        for exp in _exponents_of_degree(M.nvars, degree):
            vectors.append(list(power(exp).flat))
        grown = rank(vectors, ncols)
        if grown == current and degree > 0:
            return grown
        current, degree = grown, degree + 1


def _exponents_of_degree(n, degree):
    return [exp for exp in product(range(degree + 1), repeat=n) if sum(exp) == degree]


def _relations(columns, monomials, ring):
    """Polynomials sum c_a x^a whose coefficient vector kills the given columns."""
    field = ring.field
    if not monomials:
        return []
    length = len(columns[0])
    rows = [[columns[c][r] for c in range(len(monomials))] for r in range(length)]
    kernel = nullspace(rows, len(monomials), field.zero(), field.one())
    reduced, _ = rref(kernel, len(monomials))
    return [Polynomial.from_terms(ring, {m: c for m, c in zip(monomials, row) if c}) for row in reduced]


@dataclass(frozen=True)
class AnnihilatorResult:
    ideal: Ideal
    complete: bool

    def to_dict(self):
        return {"ideal": self.ideal.format(), "complete": self.complete}


def module_annihilator_Z(M, ring, degree_bound=None):
    """{p : deg p <= bound, p(X) = 0} as an ideal, with a completeness flag."""
    if M.dim == 0:
        return AnnihilatorResult(groebner_basis(Ideal(ring, [ring.one()])), True)
    bound = degree_bound if degree_bound is not None else (config.DEGREE_CAP or M.dim)
    monomials = ring.monomials(bound)
    power = _power_cache(M)
    columns = [list(power(exp).flat) for exp in monomials]
    J = groebner_basis(Ideal(ring, _relations(columns, monomials, ring)))
    for g in J.generators:
        if not is_zero(evaluate(g, M, power)):
            raise InputError(f"annihilator generator {g} does not annihilate")
    complete = (
        not J.is_zero()
        and krull_dimension(J) == 0
        and quotient_dimension(J) == matrix_algebra_dimension(M)
    )
    if not complete:
        logger.info("⚠️ annihilator may be incomplete at degree bound %d", bound)
    return AnnihilatorResult(J, complete)


def vector_annihilator(M, vector, ring, degree_bound=None):
    """Ann_Z(v) = {p : p(X) v = 0}, degree-capped."""
    bound = degree_bound if degree_bound is not None else (config.DEGREE_CAP or max(M.dim, 1))
    v = np.array([M.field.coerce(c) for c in vector], dtype=object)
    monomials = ring.monomials(bound)
    power = _power_cache(M)
    columns = [list(power(exp) @ v) for exp in monomials]
    return groebner_basis(Ideal(ring, _relations(columns, monomials, ring)))


@dataclass(frozen=True)
class TorsionResult:
    ideal: Ideal
    witness: tuple

    def to_dict(self):
        return {"ideal": self.ideal.format(), "witness": [str(c) for c in self.witness]}


def torsion_ideal(M, ring, degree_bound=None):
    """A maximal vector annihilator among the standard basis and the all-ones vector."""
    if M.dim == 0:
        raise InputError("the zero module has no nonzero vectors")
    candidates = [tuple(1 if k == s else 0 for k in range(M.dim)) for s in range(M.dim)]
    if M.dim > 1:
        candidates.append((1,) * M.dim)
    found = [(vector_annihilator(M, v, ring, degree_bound), v) for v in candidates]
    for ideal, witness in found:
        if not any(
            ideal_contains(other, ideal) and not ideal_contains(ideal, other) for other, _ in found
        ):
            return TorsionResult(ideal, tuple(M.field.coerce(c) for c in witness))
    ideal, witness = found[0]
    return TorsionResult(ideal, tuple(M.field.coerce(c) for c in witness))


@dataclass(frozen=True)
class IvIdealReport:
    ok: bool
    torsion: Ideal
    core: Ideal
    annihilator: Ideal

    def to_dict(self):
        return {
            "ok": self.ok,
            "torsion": self.torsion.format(),
            "core": self.core.format(),
            "annihilator": self.annihilator.format(),
        }


def ividealiii_check(M, P, degree_bound=None):
    """Compare the Poisson core of the torsion ideal with the annihilator (M assumed simple)."""
    torsion = torsion_ideal(M, P.ring, degree_bound).ideal
    core = poisson_core(torsion, P)
    annihilator = module_annihilator_Z(M, P.ring, degree_bound).ideal
    return IvIdealReport(ideal_equal(core, annihilator), torsion, core, annihilator)


def induced_module(A, M):
    """A (x)_Z M for a module M over Z, with nabla(x)(a (x) m) = {x,a} (x) m + a (x) nabla(x) m."""
    order = algebra_as_order(A) if isinstance(A, PoissonAlgebra) else A
    if not isinstance(order, PoissonOrder):
        raise InputError("induced_module needs a Poisson order")
    if M.E is not None:
        raise InputError("induced_module needs a module over the base algebra")
    m, d = order.rank, M.dim
    field = M.field
    size = m * d
    power = _power_cache(M)

    def blocks(entry):
        """Block matrix whose (t, l) block is entry(t, l)(X)."""
        out = zeros(field, size)
        for t in range(m):
            for l in range(m):
                value = entry(t, l)
                if value is not None:
                    out[t * d:(t + 1) * d, l * d:(l + 1) * d] = value
        return out

    def diagonal(block):
        return blocks(lambda t, l: block if t == l else None)

    X = [diagonal(M.X[i]) for i in range(M.nvars)]
    E = [
        blocks(lambda t, l, j=j: evaluate(order.mult[j][l][t], M, power) if order.mult[j][l][t] else None)
        for j in range(m)
    ]
    D = []
    for i in range(M.nvars):
        ham = blocks(lambda t, l, i=i: evaluate(order.ham[i][l][t], M, power) if order.ham[i][l][t] else None)
        D.append(ham + diagonal(M.D[i]))
    return PoissonModule(field, size, X, D, E if order.rank > 1 or order.names != ("1",) else None)


def truncated_regular_module(P, degree):
    """Z / (monomials of degree > degree) with nabla(x_i) = H(x_i)."""
    ring = P.ring
    for row in P.table:
        for entry in row:
            if entry.constant_value():
                raise InputError("truncation needs bracket entries without constant terms")
    monomials = ring.monomials(degree)
    index = {m: k for k, m in enumerate(monomials)}
    size = len(monomials)
    field = ring.field

    def operator(fn):
        matrix = zeros(field, size)
        for col, exp in enumerate(monomials):
            for image_exp, c in fn(ring.monomial(exp)).terms.items():
                if image_exp in index:
                    matrix[index[image_exp], col] = c
        return matrix

    gens = ring.gens()
    X = [operator(lambda p, x=x: x * p) for x in gens]
    D = []
    for i in range(ring.nvars):
        derivation = hamiltonian(gens[i], P)
        D.append(operator(lambda p, derivation=derivation: apply_derivation(derivation, p)))
    return PoissonModule(field, size, X, D)

