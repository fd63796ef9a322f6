"""Poisson orders: finite free Z-algebras with a Hamiltonian action.

An element of an order of rank m is a tuple of m polynomials (coordinates in
the basis e_1..e_m). The order is given by three tables over Z:

- ``mult[j][k]``: coordinates of e_j * e_k
- ``unit``: coordinates of 1_A
- ``ham[i][j]``: coordinates of {x_i, e_j}

and H(x_i) acts on a = sum_j a_j e_j as sum_j ({x_i, a_j} e_j + a_j {x_i, e_j}).
"""
import logging
from dataclasses import dataclass

from services import config
from services.errors import InputError, InternalInvariantError, ValidationFailure
from services.groebner import Ideal, groebner_basis
from services.ideals import poisson_core
from services.linalg import rank
from services.modules import Submodule, submodule_equal, syzygy_kernel
from services.poisson import PoissonAlgebra, bracket

logger = logging.getLogger(__name__)


class PoissonOrder:
    __slots__ = ("base", "names", "mult", "unit", "ham")

    def __init__(self, base, names, mult, unit, ham):
        ring = base.ring
        m = len(names)
        if len(set(names)) != m:
            raise InputError(f"duplicate basis names in {names}")

        def vector(value, what):
            value = tuple(ring.coerce(p) for p in value)
            if len(value) != m:
                raise InputError(f"{what} has {len(value)} coordinates, expected {m}")
            return value

        if len(mult) != m or any(len(row) != m for row in mult):
            raise InputError(f"multiplication table must be {m}x{m}")
        if len(ham) != base.nvars or any(len(row) != m for row in ham):
            raise InputError(f"hamiltonian table must be {base.nvars}x{m}")
        self.base = base
        self.names = tuple(names)
        self.mult = tuple(
            tuple(vector(v, f"{names[j]}*{names[k]}") for k, v in enumerate(row)) for j, row in enumerate(mult)
        )
        self.unit = vector(unit, "unit")
        self.ham = tuple(
            tuple(vector(v, f"{{{base.variables[i]}, {names[j]}}}") for j, v in enumerate(row))
            for i, row in enumerate(ham)
        )

    @property
    def ring(self):
        return self.base.ring

    @property
    def rank(self):
        return len(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown basis element {name!r}") from None

    def zero(self):
        return (self.ring.zero(),) * self.rank

    def basis_element(self, j):
        return tuple(self.ring.one() if k == j else self.ring.zero() for k in range(self.rank))

    def scalar(self, z):
        """z * 1_A."""
        z = self.ring.coerce(z)
        return tuple(z * u for u in self.unit)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, z, a):
        return tuple(z * x for x in a)

    def multiply(self, a, b):
        out = [self.ring.zero()] * self.rank
        for j, aj in enumerate(a):
            if not aj:
                continue
            for k, bk in enumerate(b):
                if not bk:
                    continue
                coeff = aj * bk
                for l, mu in enumerate(self.mult[j][k]):
                    if mu:
                        out[l] = out[l] + coeff * mu
        return tuple(out)

    def delta(self, i, a):
        """H(x_i) applied to a."""
        x = self.ring.gen(i)
        out = [bracket(x, aj, self.base) for aj in a]
        for j, aj in enumerate(a):
            if aj:
                for l, h in enumerate(self.ham[i][j]):
                    if h:
                        out[l] = out[l] + aj * h
        return tuple(out)

    def hamiltonian(self, z, a):
        """H(z) a = sum_k (d_k z) H(x_k) a."""
        z = self.ring.coerce(z)
        out = self.zero()
        for k in range(self.base.nvars):
            dz = z.derivative(k)
            if dz:
                out = self.add(out, self.scale(dz, self.delta(k, a)))
        return out

    def is_constant(self):
        """Every table entry is a constant polynomial."""
        entries = [p for row in self.mult for v in row for p in v] + list(self.unit)
        entries += [p for row in self.ham for v in row for p in v]
        return all(p.is_constant() for p in entries)

    def format_element(self, a):
        pieces = []
        for name, coord in zip(self.names, a):
            if not coord:
                continue
            body = coord.format()
            if self.rank == 1 and name == "1":
                pieces.append(body)
            elif len(coord.terms) > 1:
                pieces.append(f"{name}*({body})")
            elif coord == 1:
                pieces.append(name)
            else:
                pieces.append(f"{name}*{body}")
        return " + ".join(pieces) if pieces else "0"

    def __eq__(self, other):
        if not isinstance(other, PoissonOrder):
            return NotImplemented
        return (self.base, self.names, self.mult, self.unit, self.ham) == (
            other.base, other.names, other.mult, other.unit, other.ham
        )

    __hash__ = None

    def __repr__(self):
        return f"PoissonOrder(rank={self.rank}, basis={', '.join(self.names)})"


@dataclass(frozen=True)
class OrderViolation:
    axiom: str
    indices: tuple
    defect: str

    def to_dict(self):
        return {"axiom": self.axiom, "indices": list(self.indices), "defect": self.defect}


def check_unit(A):
    out = []
    for j in range(A.rank):
        e = A.basis_element(j)
        for side, value in (("left", A.multiply(A.unit, e)), ("right", A.multiply(e, A.unit))):
            if value != e:
                out.append(OrderViolation("unit", (j,), f"{side}: {A.format_element(value)}"))
    return out


def check_associativity(A):
    out = []
    basis = [A.basis_element(j) for j in range(A.rank)]
    for j, ej in enumerate(basis):
        for k, ek in enumerate(basis):
            ejk = A.mult[j][k]
            for l, el in enumerate(basis):
                defect = A.sub(A.multiply(ejk, el), A.multiply(ej, A.mult[k][l]))
                if any(defect):
                    out.append(OrderViolation("associativity", (j, k, l), A.format_element(defect)))
    return out


def check_derivation(A):
    """Axiom (i): H(x_i)(e_j e_k) = H(x_i)(e_j) e_k + e_j H(x_i)(e_k)."""
    out = []
    basis = [A.basis_element(j) for j in range(A.rank)]
    for i in range(A.base.nvars):
        images = [A.delta(i, e) for e in basis]
        for j in range(A.rank):
            for k in range(A.rank):
                lhs = A.delta(i, A.mult[j][k])
                rhs = A.add(A.multiply(images[j], basis[k]), A.multiply(basis[j], images[k]))
                defect = A.sub(lhs, rhs)
                if any(defect):
                    out.append(OrderViolation("derivation", (i, j, k), A.format_element(defect)))
    return out


def check_compatibility(A):
    """H(x_i) on Z*1_A is the bracket of Z, i.e. H(x_i) 1_A = 0."""
    out = []
    for i in range(A.base.nvars):
        value = A.delta(i, A.unit)
        if any(value):
            out.append(OrderViolation("compatibility", (i,), A.format_element(value)))
    return out


def check_biderivation(A):
    """Axiom (ii): H(x_i x_k) e_j = x_i H(x_k) e_j + x_k H(x_i) e_j."""
    out = []
    gens = A.ring.gens()
    for i in range(A.base.nvars):
        for k in range(i, A.base.nvars):
            for j in range(A.rank):
                e = A.basis_element(j)
                lhs = A.hamiltonian(gens[i] * gens[k], e)
                rhs = A.add(A.scale(gens[i], A.delta(k, e)), A.scale(gens[k], A.delta(i, e)))
                defect = A.sub(lhs, rhs)
                if any(defect):
                    out.append(OrderViolation("biderivation", (i, k, j), A.format_element(defect)))
    return out


CHECKS = (
    ("unit", check_unit),
    ("associativity", check_associativity),
    ("derivation", check_derivation),
    ("compatibility", check_compatibility),
    ("biderivation", check_biderivation),
)


def order_violations(A):
    violations = []
    for _, check in CHECKS:
        violations.extend(check(A))
    return violations


def make_order(base, mult, unit, ham, names=None):
    """Build and verify a Poisson order; the first violated axiom is raised."""
    names = tuple(names) if names else tuple(f"e{j + 1}" for j in range(len(unit)))
    A = PoissonOrder(base, names, mult, unit, ham)
    for axiom, check in CHECKS:
        violations = check(A)
        if violations:
            first = violations[0]
            raise ValidationFailure(
                f"order violates {axiom} at {list(first.indices)}: {first.defect}",
                code=axiom,
                indices=list(first.indices),
                defect=first.defect,
            )
    logger.info("✅ order of rank %d verified", A.rank)
    return A


def algebra_as_order(P):
    """Z as a rank-1 order over itself."""
    ring = P.ring
    return PoissonOrder(P, ("1",), [[(ring.one(),)]], (ring.one(),), [[(ring.zero(),)] for _ in range(P.nvars)])


def _as_order(value):
    return algebra_as_order(value) if isinstance(value, PoissonAlgebra) else value


def _same_base(A, B):
    if not (A.ring.same_space(B.ring) and A.base == B.base):
        raise InputError("orders are over different Poisson algebras")


def matrix_units(P, n):
    """Mat_n(Z) with the matrix-unit basis and zero Hamiltonian action on it."""
    if n < 1:
        raise InputError("matrix size must be at least 1")
    ring = P.ring
    sep = "_" if n > 9 else ""
    names = [f"E{a + 1}{sep}{b + 1}" for a in range(n) for b in range(n)]
    m = n * n

    def unit_at(k):
        return tuple(ring.one() if t == k else ring.zero() for t in range(m))

    zero = (ring.zero(),) * m
    mult = [
        [unit_at(a * n + d) if b == c else zero for c in range(n) for d in range(n)]
        for a in range(n)
        for b in range(n)
    ]
    unit = tuple(ring.one() if k // n == k % n else ring.zero() for k in range(m))
    ham = [[zero] * m for _ in range(P.nvars)]
    return PoissonOrder(P, names, mult, unit, ham)


def matrix_order(base, n):
    """Mat_n(A) for a Poisson algebra or order A, with entrywise Hamiltonian action."""
    A = _as_order(base)
    return tensor_order(A, matrix_units(A.base, n))


def opposite_order(A):
    A = _as_order(A)
    mult = [[A.mult[k][j] for k in range(A.rank)] for j in range(A.rank)]
    return PoissonOrder(A.base, A.names, mult, A.unit, A.ham)


def tensor_order(A, B):
    """A (x)_Z B with (a (x) b)(c (x) d) = ac (x) bd and {z, a (x) b} = {z,a} (x) b + a (x) {z,b}."""
    A, B = _as_order(A), _as_order(B)
    _same_base(A, B)
    ring = A.ring
    ma, mb = A.rank, B.rank
    if A.names == ("1",):
        names = B.names
    elif B.names == ("1",):
        names = A.names
    else:
        names = tuple(f"{a}_{b}" for a in A.names for b in B.names)

    def pair_vector(u, v):
        out = [ring.zero()] * (ma * mb)
        for l, ul in enumerate(u):
            if ul:
                for t, vt in enumerate(v):
                    if vt:
                        out[l * mb + t] = out[l * mb + t] + ul * vt
        return tuple(out)

    mult = [
        [pair_vector(A.mult[a][c], B.mult[b][d]) for c in range(ma) for d in range(mb)]
        for a in range(ma)
        for b in range(mb)
    ]
    unit = pair_vector(A.unit, B.unit)
    ham = []
    for i in range(A.base.nvars):
        row = []
        for a in range(ma):
            for b in range(mb):
                left = pair_vector(A.ham[i][a], B.basis_element(b))
                right = pair_vector(A.basis_element(a), B.ham[i][b])
                row.append(tuple(x + y for x, y in zip(left, right)))
        ham.append(row)
    return PoissonOrder(A.base, names, mult, unit, ham)


class OrderIdeal:
    """Two-sided ideal of an order, kept as a Z-submodule of Z^m."""

    __slots__ = ("parent", "generators", "closure")

    def __init__(self, parent, generators):
        self.parent = parent
        self.generators = tuple(tuple(parent.ring.coerce(p) for p in g) for g in generators)
        self.closure = _two_sided(parent, self.generators)

    def basis(self):
        return self.closure.basis()

    def is_zero(self):
        return self.closure.is_zero()

    def is_unit(self):
        return order_ideal_member(self.parent.unit, self)

    def __contains__(self, a):
        return order_ideal_member(a, self)

    def __eq__(self, other):
        if not isinstance(other, OrderIdeal):
            return NotImplemented
        return submodule_equal(self.closure, other.closure)

    __hash__ = None

    def format(self):
        vectors = self.basis()
        if not vectors:
            return "(0)"
        return "(" + ", ".join(self.parent.format_element(v) for v in vectors) + ")"

    __str__ = format


def _two_sided(A, generators):
    basis = [A.basis_element(j) for j in range(A.rank)]
    spanning = []
    for g in generators:
        for ej in basis:
            left = A.multiply(ej, g)
            for ek in basis:
                spanning.append(A.multiply(left, ek))
    return Submodule(A.ring, A.rank, spanning)


def order_ideal_closure(gens, A):
    return OrderIdeal(A, gens)


def order_ideal_member(a, I):
    return tuple(I.parent.ring.coerce(p) for p in a) in I.closure


def extend_ideal(I, A):
    """I * A for an ideal I of Z."""
    return OrderIdeal(A, [A.scalar(f) for f in I.generators])


def contract_ideal(J):
    """J intersected with Z * 1_A, as an ideal of Z."""
    A = J.parent
    kernel = syzygy_kernel([A.unit], J.closure)
    return groebner_basis(Ideal(A.ring, [v[0] for v in kernel.generators]))


def order_is_stable(I):
    A = I.parent
    for g in I.closure.basis():
        for i in range(A.base.nvars):
            if A.delta(i, g) not in I.closure:
                return False
    return True


def is_azumaya(A):
    """Constant tables and A (x) A^op -> End_Z(A), a (x) b -> (c -> a c b), bijective.

    Two-sided ideals of such an order are exactly the J = (J cap Z) A.
    """
    if not A.is_constant():
        return False
    m = A.rank
    field = A.ring.field
    zero = field.zero()
    table = [[[p.constant_value() for p in A.mult[j][k]] for k in range(m)] for j in range(m)]
    rows = []
    for j in range(m):
        for k in range(m):
            row = []
            for l in range(m):
                image = [zero] * m
                for q, c in enumerate(table[j][l]):
                    if c:
                        for p, d in enumerate(table[q][k]):
                            if d:
                                image[p] = image[p] + c * d
                row.extend(image)
            rows.append(row)
    return rank(rows, m * m) == m * m


def _differential_order_core(I, round_cap):
    A = I.parent
    ring = A.ring
    n, m = A.base.nvars, A.rank
    current = I
    for rounds in range(1, round_cap + 1):
        basis = current.closure.basis()
        rows = [tuple(p for i in range(n) for p in A.delta(i, g)) for g in basis]
        target_gens = []
        for v in basis:
            for i in range(n):
                block = [ring.zero()] * (n * m)
                block[i * m:(i + 1) * m] = v
                target_gens.append(tuple(block))
        kernel = syzygy_kernel(rows, Submodule(ring, n * m, target_gens), ring=ring)
        shrunk_gens = []
        for c in kernel.generators:
            element = A.zero()
            for cj, g in zip(c, basis):
                if cj:
                    element = A.add(element, A.scale(cj, g))
            shrunk_gens.append(element)
        shrunk = OrderIdeal(A, shrunk_gens)
        if shrunk == current:
            logger.info("✅ order core stabilised after %d round(s)", rounds)
            return shrunk
        current = shrunk
    raise InternalInvariantError(f"order core did not stabilise within {round_cap} rounds", code="round_cap")


def order_poisson_core(I, A=None, round_cap=None):
    """Largest H(Z)-stable two-sided ideal of the order inside I.

    Over an Azumaya order the core is P(I cap Z) A; elsewhere the
    differential iteration runs on Z^m.
    """
    round_cap = round_cap or config.ROUND_CAP
    if A is not None and A is not I.parent and A != I.parent:
        raise InputError("ideal belongs to a different order")
    A = I.parent
    if I.is_zero() or I.is_unit() or order_is_stable(I):
        return I
    if is_azumaya(A):
        return extend_ideal(poisson_core(contract_ideal(I), A.base, round_cap=round_cap), A)
    return _differential_order_core(I, round_cap)
