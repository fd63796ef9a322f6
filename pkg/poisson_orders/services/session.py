"""Session documents: named algebras, orders, ideals, modules and quantum spaces.

A session is a JSON object ``{"version": 1, "objects": [...]}``. Every object
has a ``kind`` and a ``name``; ``over`` refers to another object by name.
Objects are built in dependency order and validated as they are built.
Diagnostics carry the line and column where the offending object starts.
"""
import json
import logging
from graphlib import CycleError, TopologicalSorter
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from services.errors import InputError, PoissonError, SessionError, ValidationFailure
from services.field import CoefficientField
from services.groebner import Ideal
from services.ideals import maximal_ideal
from services.order import OrderIdeal, PoissonOrder, make_order, matrix_order
from services.poisson import PoissonAlgebra, jacobi_check, lie_poisson, named_lie_algebra
from services.poisson_module import PoissonModule, format_matrix, module_check
from services.poly import MonomialOrder, PolynomialRing
from services.semiclassical import QuantumAffineSpace

logger = logging.getLogger(__name__)

Scalar = Union[int, str]
Matrix = list[list[Scalar]]


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str


class AlgebraSpec(_Spec):
    kind: Literal["poisson_algebra"]
    variables: list[str] = []
    field: str = "rationals"
    order: str | None = None
    lie: str | None = None
    brackets: dict[str, Scalar] = {}
    allow_non_jacobi: bool = False


class OrderSpec(_Spec):
    kind: Literal["poisson_order"]
    over: str
    matrix: int | None = None
    basis: list[str] = []
    unit: dict[str, Scalar] = {}
    mult: dict[str, dict[str, Scalar]] = {}
    hamiltonian: dict[str, dict[str, Scalar]] = {}


class IdealSpec(_Spec):
    kind: Literal["ideal"]
    over: str
    generators: list[Union[Scalar, dict[str, Scalar]]] = []
    point: list[Scalar] | None = None


class ModuleSpec(_Spec):
    kind: Literal["module"]
    over: str
    dim: int = Field(ge=0)
    X: dict[str, Matrix] = {}
    D: dict[str, Matrix] = {}
    E: dict[str, Matrix] | None = None


class QuantumSpec(_Spec):
    kind: Literal["quantum_space"]
    n: int = Field(ge=1)


ObjectSpec = Annotated[
    Union[AlgebraSpec, OrderSpec, IdealSpec, ModuleSpec, QuantumSpec], Field(discriminator="kind")
]


class SessionDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: Literal[1] = 1
    objects: list[ObjectSpec] = []


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _object_positions(text):
    """(line, column) of each element of the top-level ``objects`` array."""
    decoder = json.JSONDecoder()
    start = text.find('"objects"')
    if start < 0:
        return []
    index = text.find("[", start)
    positions = []
    while index >= 0:
        index += 1
        while index < len(text) and text[index] in " \t\r\n,":
            index += 1
        if index >= len(text) or text[index] == "]":
            break
        positions.append(_position(text, index))
        try:
            _, index = decoder.raw_decode(text, index)
        except json.JSONDecodeError:
            break
        index -= 1
    return positions


class Session:
    """Built objects of a session document, looked up by name."""

    def __init__(self, document, positions=(), order=None):
        self.document = document
        self.positions = list(positions)
        self.order_override = order
        self.specs = {}
        self.objects = {}
        for k, spec in enumerate(document.objects):
            if spec.name in self.specs:
                raise SessionError(f"duplicate object name {spec.name!r}", code="duplicate", **self._where(k))
            self.specs[spec.name] = (k, spec)
        self._build_all()

    def _where(self, k):
        if k < len(self.positions):
            line, column = self.positions[k]
            return {"line": line, "column": column}
        return {}

    def _build_all(self):
        graph = TopologicalSorter()
        for name, (k, spec) in self.specs.items():
            over = getattr(spec, "over", None)
            if over is not None and over not in self.specs:
                raise SessionError(
                    f"{spec.kind} {name!r} refers to unknown object {over!r}", code="unresolved", **self._where(k)
                )
            graph.add(name, *([over] if over else []))
        try:
            ordered = list(graph.static_order())
        except CycleError as error:
            cycle = error.args[1]
            k, _ = self.specs[cycle[0]]
            raise SessionError(
                f"cyclic references: {' -> '.join(cycle)}", code="cycle", **self._where(k)
            ) from None
        for name in ordered:
            k, spec = self.specs[name]
            try:
                self.objects[name] = getattr(self, f"_build_{spec.kind}")(spec)
            except SessionError:
                raise
            except PoissonError as error:
                details = dict(error.details)
                # expression positions are relative to the offending string
                if "column" in details:
                    details["expression_column"] = details.pop("column")
                    details.pop("line", None)
                raise SessionError(
                    f"{spec.kind} {name!r}: {error.message}", code=error.code, **self._where(k), **details
                ) from error
            logger.debug("🧩 built %s %r", spec.kind, name)

    # builders

    def _build_poisson_algebra(self, spec):
        order = MonomialOrder.from_name(self.order_override or spec.order or "degrevlex")
        coefficients = CoefficientField.from_name(spec.field)
        if spec.lie is not None:
            variables, constants = named_lie_algebra(spec.lie)
            if spec.variables and len(spec.variables) != len(variables):
                raise InputError(f"Lie algebra {spec.lie!r} has {len(variables)} generators")
            P = lie_poisson(constants, spec.variables or variables, coefficients)
            return P.with_ring(PolynomialRing(P.variables, coefficients, order))
        ring = PolynomialRing(tuple(spec.variables), coefficients, order)
        n = ring.nvars
        table = [[None] * n for _ in range(n)]
        for key, text in spec.brackets.items():
            i, j = self._pair(ring, key)
            table[i][j] = ring.coerce(text)
        for i in range(n):
            for j in range(n):
                if table[i][j] is None:
                    table[i][j] = -table[j][i] if table[j][i] is not None else ring.zero()
        P = PoissonAlgebra(ring, table)
        if not spec.allow_non_jacobi:
            report = jacobi_check(P)
            if not report.ok:
                i, j, k, defect = report.violations[0]
                raise ValidationFailure(
                    f"bracket violates Jacobi on ({ring.variables[i]}, {ring.variables[j]}, {ring.variables[k]}): {defect}",
                    code="jacobi",
                    triple=[i, j, k],
                    defect=defect,
                )
        return P

    @staticmethod
    def _pair(ring, key):
        left, sep, right = key.partition(",")
        if not sep:
            raise InputError(f"bracket key {key!r} must look like 'x,y'")
        return ring.index(left.strip()), ring.index(right.strip())

    def _parent(self, spec, *kinds):
        parent = self.objects[spec.over]
        wanted = {"algebra": PoissonAlgebra, "order": PoissonOrder}
        if not isinstance(parent, tuple(wanted[k] for k in kinds)):
            raise InputError(f"{spec.kind} {spec.name!r} must be over a {' or '.join(kinds)}")
        return parent

    def _build_poisson_order(self, spec):
        if spec.matrix is not None:
            return matrix_order(self._parent(spec, "algebra", "order"), spec.matrix)
        P = self._parent(spec, "algebra")
        ring = P.ring
        names = tuple(spec.basis)
        m = len(names)
        index = {name: k for k, name in enumerate(names)}

        def vector(coords, what):
            out = [ring.zero()] * m
            for name, text in coords.items():
                if name not in index:
                    raise InputError(f"{what}: unknown basis element {name!r}")
                out[index[name]] = ring.coerce(text)
            return tuple(out)

        mult = [[(ring.zero(),) * m for _ in range(m)] for _ in range(m)]
        for key, coords in spec.mult.items():
            left, sep, right = key.partition("*")
            if not sep or left.strip() not in index or right.strip() not in index:
                raise InputError(f"multiplication key {key!r} must look like 'a*b' with basis names")
            mult[index[left.strip()]][index[right.strip()]] = vector(coords, key)
        ham = [[(ring.zero(),) * m for _ in range(m)] for _ in range(P.nvars)]
        for key, coords in spec.hamiltonian.items():
            x, sep, a = key.partition(",")
            if not sep or a.strip() not in index:
                raise InputError(f"hamiltonian key {key!r} must look like 'x,a'")
            ham[ring.index(x.strip())][index[a.strip()]] = vector(coords, key)
        return make_order(P, mult, vector(spec.unit, "unit"), ham, names)

    def _build_ideal(self, spec):
        parent = self._parent(spec, "algebra", "order")
        if isinstance(parent, PoissonOrder):
            if spec.point is not None:
                raise InputError("order ideals are given by generators")
            return OrderIdeal(parent, [order_element(parent, g) for g in spec.generators])
        if spec.point is not None:
            return maximal_ideal(parent.ring, [constant_value(parent.ring, a) for a in spec.point])
        if any(isinstance(g, dict) for g in spec.generators):
            raise InputError("ideals of an algebra are given by polynomial generators")
        return Ideal(parent.ring, [parent.ring.coerce(g) for g in spec.generators])

    def _build_module(self, spec):
        parent = self._parent(spec, "algebra", "order")
        P = parent.base if isinstance(parent, PoissonOrder) else parent
        ring = P.ring

        def matrix(rows):
            return [[constant_value(ring, value) for value in row] for row in rows]

        def family(given, names, what):
            unknown = set(given) - set(names)
            if unknown:
                raise InputError(f"{what} matrices for unknown names: {', '.join(sorted(unknown))}")
            zero = [[0] * spec.dim for _ in range(spec.dim)]
            return [matrix(given.get(name, zero)) for name in names]

        X = family(spec.X, P.variables, "X")
        D = family(spec.D, P.variables, "D")
        E = None
        if spec.E is not None:
            if not isinstance(parent, PoissonOrder):
                raise InputError("basis matrices only make sense for modules over an order")
            E = family(spec.E, parent.names, "E")
        M = PoissonModule(ring.field, spec.dim, X, D, E)
        report = module_check(M, parent)
        if not report.ok:
            first = report.violations[0]
            raise ValidationFailure(
                f"module fails the {first.axiom} axiom at {list(first.indices)}",
                code="module",
                violations=[v.to_dict() for v in report.violations],
            )
        return M

    def _build_quantum_space(self, spec):
        return QuantumAffineSpace(spec.n)

    # lookup

    def get(self, name, *types):
        if name not in self.objects:
            raise InputError(f"no object named {name!r} in the session", code="unresolved")
        value = self.objects[name]
        if types and not isinstance(value, types):
            kinds = ", ".join(t.__name__ for t in types)
            raise InputError(f"{name!r} is a {type(value).__name__}, expected {kinds}")
        return value

    def algebra(self, name):
        return self.get(name, PoissonAlgebra)

    def order(self, name):
        return self.get(name, PoissonOrder)

    def parent_of(self, name):
        """The algebra or order an ideal or module is declared over."""
        _, spec = self.specs[name]
        return self.objects[spec.over]

    def module(self, name):
        return self.get(name, PoissonModule), self.parent_of(name)


def constant_value(ring, value):
    p = ring.coerce(value)
    if not p.is_constant():
        raise InputError(f"matrix entry {value!r} is not a constant")
    return p.constant_value()


def order_element(A, value):
    """An order element from {basis name: polynomial} or a polynomial (times 1_A)."""
    if isinstance(value, dict):
        coords = [A.ring.zero()] * A.rank
        for name, text in value.items():
            coords[A.index(name)] = A.ring.coerce(text)
        return tuple(coords)
    return A.scalar(A.ring.coerce(value))


def parse(text, order=None):
    """Parse and build a session from JSON text."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as error:
        raise SessionError(f"invalid JSON: {error.msg}", code="syntax", line=error.lineno, column=error.colno) from None
    positions = _object_positions(text)
    try:
        document = SessionDocument.model_validate(raw)
    except ValidationError as error:
        first = error.errors()[0]
        loc = first["loc"]
        where = {}
        if len(loc) >= 2 and loc[0] == "objects" and isinstance(loc[1], int) and loc[1] < len(positions):
            where = dict(zip(("line", "column"), positions[loc[1]]))
        path = ".".join(str(part) for part in loc)
        raise SessionError(f"{path}: {first['msg']}", code="schema", **where) from None
    return Session(document, positions, order)


def load(path, order=None):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as error:
        raise SessionError(f"cannot read session {path}: {error}", code="unreadable") from None
    logger.info("📂 loading session %s", path)
    return parse(text, order)


# serialization


def serialize_algebra(P, name, allow_non_jacobi=False):
    entries = {f"{P.variables[i]},{P.variables[j]}": str(p) for (i, j), p in P.upper_entries().items()}
    out = {
        "kind": "poisson_algebra",
        "name": name,
        "variables": list(P.variables),
        "field": P.ring.field.name,
        "order": P.ring.order.label,
        "brackets": entries,
    }
    if allow_non_jacobi:
        out["allow_non_jacobi"] = True
    return out


def _order_dict(name, A, spec):
    if spec.matrix is not None:
        return {"kind": "poisson_order", "name": name, "over": spec.over, "matrix": spec.matrix}

    def coords(vector):
        return {A.names[k]: str(p) for k, p in enumerate(vector) if p}

    mult = {
        f"{A.names[j]}*{A.names[k]}": coords(A.mult[j][k])
        for j in range(A.rank)
        for k in range(A.rank)
        if any(A.mult[j][k])
    }
    ham = {
        f"{A.base.variables[i]},{A.names[j]}": coords(A.ham[i][j])
        for i in range(A.base.nvars)
        for j in range(A.rank)
        if any(A.ham[i][j])
    }
    return {
        "kind": "poisson_order",
        "name": name,
        "over": spec.over,
        "basis": list(A.names),
        "unit": coords(A.unit),
        "mult": mult,
        "hamiltonian": ham,
    }


def _ideal_dict(name, I, spec):
    out = {"kind": "ideal", "name": name, "over": spec.over}
    if isinstance(I, OrderIdeal):
        out["generators"] = [{I.parent.names[k]: str(p) for k, p in enumerate(g) if p} for g in I.generators]
    elif spec.point is not None:
        out["point"] = [str(I.ring.coerce(a)) for a in spec.point]
    else:
        out["generators"] = [str(g) for g in I.generators]
    return out


def module_dict(M, names, basis_names=None):
    out = {
        "dim": M.dim,
        "X": {name: format_matrix(m, M.field) for name, m in zip(names, M.X)},
        "D": {name: format_matrix(m, M.field) for name, m in zip(names, M.D)},
    }
    if M.E is not None:
        out["E"] = {name: format_matrix(m, M.field) for name, m in zip(basis_names, M.E)}
    return out


def _module_dict(name, M, spec, session):
    parent = session.objects[spec.over]
    P = parent.base if isinstance(parent, PoissonOrder) else parent
    basis_names = parent.names if isinstance(parent, PoissonOrder) else None
    return {"kind": "module", "name": name, "over": spec.over, **module_dict(M, P.variables, basis_names)}


def serialize(session):
    """Canonical JSON text: sorted keys, two-space indent, declaration order kept."""
    objects = []
    for name, (_, spec) in sorted(session.specs.items(), key=lambda item: item[1][0]):
        value = session.objects[name]
        if spec.kind == "poisson_algebra":
            objects.append(serialize_algebra(value, name, spec.allow_non_jacobi))
        elif spec.kind == "poisson_order":
            objects.append(_order_dict(name, value, spec))
        elif spec.kind == "ideal":
            objects.append(_ideal_dict(name, value, spec))
        elif spec.kind == "module":
            objects.append(_module_dict(name, value, spec, session))
        else:
            objects.append({"kind": "quantum_space", "name": name, "n": value.n})
    return json.dumps({"version": 1, "objects": objects}, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
