"""The Poisson enveloping algebra A^e in PBW normal form.

A^e is generated by alpha(A) and delta(Z). Normal monomials are
``e_j * x^alpha * d[x_1]^b_1 ... d[x_n]^b_n`` and are stored as keys
``(j, alpha, b)``. Products are normalised by leftmost rewriting on words of
tokens ``("a", j, alpha)`` (the A-element e_j x^alpha) and ``("d", i)``:

- a a        -> the product in A
- d_i a      -> a d_i + H(x_i) a
- d_i d_j    -> d_j d_i + sum_k (d_k {x_i, x_j}) d_k      (i > j)

Words that do not start with an A-token are prefixed by 1_A.
"""
import logging
from dataclasses import dataclass
from itertools import combinations, product
from math import comb

from services.errors import InputError
from services.linalg import sparse_rank
from services.order import PoissonOrder, algebra_as_order
from services.poisson import PoissonAlgebra, lie_poisson
from services.poly import parse_expression

logger = logging.getLogger(__name__)


class Envelope:
    """A^e for a Poisson order (or a Poisson algebra as a rank-1 order)."""

    def __init__(self, order):
        if isinstance(order, PoissonAlgebra):
            order = algebra_as_order(order)
        if not isinstance(order, PoissonOrder):
            raise InputError("an envelope needs a Poisson algebra or a Poisson order")
        self.order = order
        self.ring = order.ring
        self.n = order.base.nvars
        self.m = order.rank
        self._zero_exp = (0,) * self.n
        self._unit_tokens = self._tokens_of(order.unit)
        self._commutators = {}
        self._actions = {}
        for i in range(self.n):
            for j in range(i):
                entry = order.base.table[i][j]
                tokens = []
                for k in range(self.n):
                    for word, c in self._tokens_of(order.scalar(entry.derivative(k))):
                        tokens.append((word + (("d", k),), c))
                self._commutators[(i, j)] = tokens

    def _tokens_of(self, a):
        """An A-element as a list of (one-token word, coefficient)."""
        out = []
        for j, coord in enumerate(a):
            for exp, c in coord.terms.items():
                out.append(((("a", j, exp),), c))
        return out

    # construction

    def element(self, terms):
        return EnvElement(self, {key: c for key, c in terms.items() if c})

    def zero(self):
        return EnvElement(self, {})

    def scalar(self, c):
        return self.alpha(self.order.scalar(self.ring.constant(c)))

    def alpha(self, a):
        a = tuple(self.ring.coerce(p) for p in a)
        terms = {}
        for j, coord in enumerate(a):
            for exp, c in coord.terms.items():
                terms[(j, exp, self._zero_exp)] = c
        return EnvElement(self, terms)

    def poly(self, p):
        return self.alpha(self.order.scalar(p))

    def basis_element(self, j):
        return self.alpha(self.order.basis_element(j))

    def delta(self, which):
        i = which if isinstance(which, int) else self.ring.index(which)
        return self._normalize({(("d", i),): self.ring.field.one()})

    def monomial(self, j, alpha, b):
        return EnvElement(self, {(j, tuple(alpha), tuple(b)): self.ring.field.one()})

    def parse(self, text):
        names = set(self.order.names)

        def resolve(token):
            if token.startswith("d[") and token.endswith("]"):
                return self.delta(self.ring.index(token[2:-1]))
            if token in self.ring.variables:
                return self.poly(self.ring.gen(token))
            if token in names and token != "1":
                return self.basis_element(self.order.index(token))
            if token == "zeta" and not self.ring.field.is_rational:
                return self.scalar(self.ring.field.zeta())
            raise InputError(f"unknown symbol {token!r} in {text!r}", code="syntax")

        def divide(a, b):
            value = b.scalar_value()
            if value is None or not value:
                raise InputError(f"can only divide by nonzero constants in {text!r}", code="syntax")
            return a.scale(self.ring.field.one() / value)

        return parse_expression(text, resolve, self.scalar, divide)

    # rewriting

    def _word(self, key):
        j, alpha, b = key
        word = [("a", j, alpha)]
        for i, power in enumerate(b):
            word.extend([("d", i)] * power)
        return tuple(word)

    def rewrite_at(self, word, pos):
        """Apply the rule at ``word[pos:pos+2]``; None when that pair is normal."""
        left, right = word[pos], word[pos + 1]
        head, tail = word[:pos], word[pos + 2:]
        if left[0] == "a" and right[0] == "a":
            out = []
            shift = tuple(x + y for x, y in zip(left[2], right[2]))
            for l, mu in enumerate(self.order.mult[left[1]][right[1]]):
                for exp, c in mu.terms.items():
                    out.append((head + (("a", l, tuple(s + e for s, e in zip(shift, exp))),) + tail, c))
            return out
        if left[0] == "d" and right[0] == "a":
            i, j, alpha = left[1], right[1], right[2]
            if (i, j, alpha) not in self._actions:
                element = self.order.scale(self.ring.monomial(alpha), self.order.basis_element(j))
                self._actions[(i, j, alpha)] = self._tokens_of(self.order.delta(i, element))
            out = [(head + (right, left) + tail, self.ring.field.one())]
            for token, c in self._actions[(i, j, alpha)]:
                out.append((head + token + tail, c))
            return out
        if left[0] == "d" and right[0] == "d" and left[1] > right[1]:
            out = [(head + (right, left) + tail, self.ring.field.one())]
            for token, c in self._commutators[(left[1], right[1])]:
                out.append((head + token + tail, c))
            return out
        return None

    def _normalize(self, words):
        """Normal form of a linear combination {word: coefficient}."""
        result = {}
        work = {}
        for word, c in words.items():
            if not word or word[0][0] != "a":
                for prefix, u in self._unit_tokens:
                    work[prefix + word] = work.get(prefix + word, 0) + c * u
            else:
                work[word] = work.get(word, 0) + c
        while work:
            word, coeff = work.popitem()
            if not coeff:
                continue
            for pos in range(len(word) - 1):
                rewritten = self.rewrite_at(word, pos)
                if rewritten is not None:
                    break
            else:
                _, j, alpha = word[0]
                b = [0] * self.n
                for token in word[1:]:
                    b[token[1]] += 1
                key = (j, alpha, tuple(b))
                value = result.get(key, 0) + coeff
                if value:
                    result[key] = value
                else:
                    result.pop(key, None)
                continue
            for new_word, c in rewritten:
                work[new_word] = work.get(new_word, 0) + coeff * c
        return EnvElement(self, result)

    def normalize_word(self, word, coeff=1):
        return self._normalize({tuple(word): self.ring.field.coerce(coeff)})

    def mul(self, u, v):
        if u.envelope is not self or v.envelope is not self:
            raise InputError("enveloping algebra elements have different parents")
        words = {}
        for ku, cu in u.terms.items():
            wu = self._word(ku)
            for kv, cv in v.terms.items():
                word = wu + self._word(kv)
                words[word] = words.get(word, 0) + cu * cv
        return self._normalize(words)

    def format_key(self, key):
        j, alpha, b = key
        pieces = []
        name = self.order.names[j]
        if not (self.m == 1 and name == "1"):
            pieces.append(name)
        for var, power in zip(self.ring.variables, alpha):
            if power:
                pieces.append(var if power == 1 else f"{var}^{power}")
        for var, power in zip(self.ring.variables, b):
            if power:
                pieces.append(f"d[{var}]" if power == 1 else f"d[{var}]^{power}")
        return "*".join(pieces)

    def sort_key(self, key):
        j, alpha, b = key
        order_key = self.ring.order.key
        return (sum(b), order_key(b), order_key(alpha), -j)


class EnvElement:
    __slots__ = ("envelope", "terms")

    def __init__(self, envelope, terms):
        self.envelope = envelope
        self.terms = terms

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            value = terms.get(key, 0) + c
            if value:
                terms[key] = value
            else:
                terms.pop(key, None)
        return EnvElement(self.envelope, terms)

    __radd__ = __add__

    def __neg__(self):
        return EnvElement(self.envelope, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return self.envelope.mul(self, self._lift(other))

    def __rmul__(self, other):
        return self.envelope.mul(self._lift(other), self)

    def _lift(self, other):
        if isinstance(other, EnvElement):
            return other
        return self.envelope.scalar(other)

    def scale(self, c):
        c = self.envelope.ring.field.coerce(c)
        return EnvElement(self.envelope, {key: v * c for key, v in self.terms.items() if v * c})

    def scalar_value(self):
        """The field element c when this element is c * 1, else None."""
        if not self.terms:
            return self.envelope.ring.field.zero()
        unit = self.envelope.scalar(1)
        key, first = next(iter(unit.terms.items()))
        if key not in self.terms:
            return None
        c = self.terms[key] / first
        return c if unit.scale(c) == self else None

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def delta_degree(self):
        return max((sum(b) for _, _, b in self.terms), default=-1)

    def top_part(self):
        d = self.delta_degree()
        return EnvElement(self.envelope, {k: c for k, c in self.terms.items() if sum(k[2]) == d})

    def format(self):
        if not self.terms:
            return "0"
        env = self.envelope
        pieces = []
        for key in sorted(self.terms, key=env.sort_key, reverse=True):
            c = self.terms[key]
            body = env.format_key(key)
            text = env.ring.field.format(c)
            if not _is_rational(c):
                coef = f"({text})"
                pieces.append(f"{coef}*{body}" if body else coef)
            elif not body:
                pieces.append(text)
            elif c == 1:
                pieces.append(body)
            elif c == -1:
                pieces.append(f"-{body}")
            else:
                pieces.append(f"{text}*{body}")
        text = pieces[0]
        for piece in pieces[1:]:
            text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return text

    __str__ = format

    def __repr__(self):
        return f"EnvElement({self.format()!r})"


def _is_rational(c):
    return getattr(c, "is_rational", lambda: True)()


def env_mul(u, v):
    return u.envelope.mul(u, v)


def delta_of(p, envelope):
    """delta(p) = sum_k (d_k p) delta(x_k)."""
    p = envelope.ring.coerce(p)
    total = envelope.zero()
    for k in range(envelope.n):
        dp = p.derivative(k)
        if dp:
            total = total + envelope.poly(dp) * envelope.delta(k)
    return total


def commutator(u, v):
    return u * v - v * u


@dataclass(frozen=True)
class PbwReport:
    predicted: int
    actual: int
    ok: bool

    def to_dict(self):
        return {"predicted": self.predicted, "actual": self.actual, "ok": self.ok}


def pbw_predicted(rank, nvars, k, d):
    return rank * comb(d + nvars, nvars) * sum(comb(j + nvars - 1, nvars - 1) for j in range(k + 1))


def _exponents(n, max_degree):
    return [exp for exp in product(range(max_degree + 1), repeat=n) if sum(exp) <= max_degree]


def pbw_dimension_check(A, k, d):
    """Rank of the products d[x]^b * (e_j x^alpha) with |b| <= k and |alpha| <= d.

    The deltas stand to the left of the A-part, so every product goes through
    the rewriting rules; PBW holds in this range exactly when the normalised
    products are linearly independent.
    """
    env = A if isinstance(A, Envelope) else Envelope(A)
    n = env.n
    order = env.order
    predicted = pbw_predicted(env.m, n, k, d)
    deltas = {}
    for b in sorted(_exponents(n, k), key=sum):
        if not any(b):
            deltas[b] = env.scalar(1)
            continue
        i = max(i for i in range(n) if b[i])
        rest = tuple(power - (t == i) for t, power in enumerate(b))
        deltas[b] = env.delta(i) * deltas[rest]
    rows = []
    for j in range(env.m):
        for alpha in _exponents(n, d):
            a = env.alpha(order.scale(env.ring.monomial(alpha), order.basis_element(j)))
            for b in deltas:
                rows.append((deltas[b] * a).terms)
    actual = sparse_rank(rows, key=env.sort_key)
    ok = actual == predicted
    if not ok:
        logger.info("❌ PBW count mismatch: predicted %d, actual %d", predicted, actual)
    return PbwReport(predicted, actual, ok)


@dataclass(frozen=True)
class OverlapReport:
    ok: bool
    unresolved: tuple = ()

    def to_dict(self):
        return {
            "ok": self.ok,
            "unresolved": [{"overlap": label, "difference": str(diff)} for label, diff in self.unresolved],
        }


def diamond_overlap_check(A):
    """Resolve every overlap ambiguity of the rewriting system both ways."""
    env = A if isinstance(A, Envelope) else Envelope(A)
    n, m = env.n, env.m
    variables = env.ring.variables
    zero_exp = env._zero_exp
    a_tokens = [("a", j, zero_exp) for j in range(m)]
    a_tokens += [("a", j, tuple(1 if t == s else 0 for t in range(n))) for j in range(m) for s in range(n)]

    def label(token):
        if token[0] == "d":
            return f"d[{variables[token[1]]}]"
        return env.format_key((token[1], token[2], zero_exp)) or "1"

    overlaps = []
    for i, j, l in combinations(reversed(range(n)), 3):
        overlaps.append((("d", i), ("d", j), ("d", l)))
    for i, j in combinations(reversed(range(n)), 2):
        for a in a_tokens:
            overlaps.append((("d", i), ("d", j), a))
    for i in range(n):
        for a in a_tokens:
            for b in a_tokens:
                overlaps.append((("d", i), a, b))
    for a in a_tokens[:m]:
        for b in a_tokens[:m]:
            for c in a_tokens[:m]:
                overlaps.append((a, b, c))

    unresolved = []
    for word in overlaps:
        one = env._normalize(dict(_as_words(env.rewrite_at(word, 0))))
        two = env._normalize(dict(_as_words(env.rewrite_at(word, 1))))
        if one != two:
            unresolved.append(("*".join(label(t) for t in word), one - two))
    if unresolved:
        logger.info("❌ %d unresolved overlap(s)", len(unresolved))
    return OverlapReport(not unresolved, tuple(unresolved))


def _as_words(pairs):
    merged = {}
    for word, c in pairs:
        merged[word] = merged.get(word, 0) + c
    return merged.items()


@dataclass(frozen=True)
class UgdReport:
    ok: bool
    mismatches: tuple = ()

    def to_dict(self):
        return {
            "ok": self.ok,
            "mismatches": [{"pair": [u, v], "difference": str(diff)} for u, v, diff in self.mismatches],
        }


def ugd_compare(constants, variables):
    """Compare commutators in A^e with the bracket of g (x) k[eps]/(eps^2).

    i(x) = delta(x), i(eps x) = alpha(x).
    """
    P = lie_poisson(constants, variables)
    env = Envelope(P)
    n = P.nvars
    images = [env.delta(k) for k in range(n)] + [env.poly(P.ring.gen(k)) for k in range(n)]
    labels = list(variables) + [f"eps*{v}" for v in variables]

    def image_of_bracket(a, b):
        # basis index a, b in 0..2n-1; eps part squares to zero
        if a >= n and b >= n:
            return env.zero()
        eps = a >= n or b >= n
        x, y = a % n, b % n
        total = env.zero()
        for k in range(n):
            c = constants[x][y][k]
            if c:
                total = total + images[k + n if eps else k].scale(c)
        return total

    mismatches = []
    for a in range(2 * n):
        for b in range(a + 1, 2 * n):
            diff = commutator(images[a], images[b]) - image_of_bracket(a, b)
            if diff:
                mismatches.append((labels[a], labels[b], diff))
    return UgdReport(not mismatches, tuple(mismatches))
