"""Submodules of free modules Z^m and the syzygy kernel.

Vectors are tuples of polynomials. Groebner bases use the position-over-term
order of ``services.groebner`` (coordinate 0 dominates).
"""
import logging

from services.errors import InputError
from services.groebner import Ideal, _Context, buchberger, reduce_vector
from services.poly import Polynomial

logger = logging.getLogger(__name__)


def to_sparse(vector, offset=0):
    return {
        (offset + pos, exp): c for pos, p in enumerate(vector) for exp, c in p.terms.items()
    }


def from_sparse(vec, ring, rank, offset=0):
    coords = [dict() for _ in range(rank)]
    for (pos, exp), c in vec.items():
        coords[pos - offset][exp] = c
    return tuple(Polynomial(ring, terms) for terms in coords)


class Submodule:
    """Submodule of ring^rank generated by ``generators`` (tuples of polynomials)."""

    __slots__ = ("ring", "rank", "generators", "_groebner")

    def __init__(self, ring, rank, generators=()):
        gens = []
        for vector in generators:
            vector = tuple(ring.coerce(p) for p in vector)
            if len(vector) != rank:
                raise InputError(f"vector of length {len(vector)} in a rank-{rank} module")
            if any(vector):
                gens.append(vector)
        self.ring = ring
        self.rank = rank
        self.generators = tuple(gens)
        self._groebner = None

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, [unit_vector(ring, rank, k) for k in range(rank)])

    @property
    def cached_groebner(self):
        return self._groebner

    def _sparse_basis(self):
        label = self.ring.order.label
        if self._groebner is None or self._groebner[0] != label:
            sparse = buchberger([to_sparse(v) for v in self.generators], self.ring, rank_one=self.rank == 1)
            self._groebner = (label, sparse)
        return self._groebner[1]

    def basis(self):
        return tuple(from_sparse(v, self.ring, self.rank) for v in self._sparse_basis())

    def normal_form(self, vector):
        ctx = _Context(self.ring)
        divisors = [(ctx.lead(v), v) for v in self._sparse_basis()]
        remainder = reduce_vector(to_sparse(tuple(self.ring.coerce(p) for p in vector)), divisors, ctx)
        return from_sparse(remainder, self.ring, self.rank)

    def __contains__(self, vector):
        return module_member(vector, self)

    def is_zero(self):
        return not self.generators

    def format(self):
        vectors = self.basis()
        if not vectors:
            return "<0>"
        return "<" + ", ".join("(" + ", ".join(p.format() for p in v) + ")" for v in vectors) + ">"

    __str__ = format


def unit_vector(ring, rank, k):
    return tuple(ring.one() if i == k else ring.zero() for i in range(rank))


def module_member(vector, S):
    if len(vector) != S.rank:
        raise InputError(f"vector of length {len(vector)} in a rank-{S.rank} module")
    return not any(S.normal_form(vector))


def submodule_contains(S, T):
    """T is a subset of S."""
    return all(module_member(v, S) for v in T.generators)


def submodule_equal(S, T):
    if S.rank != T.rank:
        return False
    return S.basis() == T.basis() if S.ring.order == T.ring.order else (
        submodule_contains(S, T) and submodule_contains(T, S)
    )


def ideal_times_free(I, rank):
    """The submodule I * ring^rank."""
    ring = I.ring
    gens = []
    for f in I.generators:
        for k in range(rank):
            gens.append(tuple(f if i == k else ring.zero() for i in range(rank)))
    return Submodule(ring, rank, gens)


def syzygy_kernel(rows, target, ring=None):
    """{g in Z^m : sum_j g_j * rows[j] lies in the target}.

    ``target`` is an Ideal (meaning I * Z^n) or a Submodule of Z^n. The
    module Groebner basis of (rows[j], e_j) together with (t, 0) for target
    generators t is computed position-over-term with the n image coordinates
    first; elements whose image part vanishes give the kernel.
    """
    ring = ring or target.ring
    m = len(rows)
    if isinstance(target, Ideal):
        n = len(rows[0]) if rows else 0
        target = ideal_times_free(target, n)
    n = target.rank
    for row in rows:
        if len(row) != n:
            raise InputError(f"row of length {len(row)} does not match target rank {n}")
    if m == 0:
        return Submodule(ring, 0, [])
    vectors = []
    for j, row in enumerate(rows):
        vec = to_sparse(tuple(ring.coerce(p) for p in row))
        vec[(n + j, (0,) * ring.nvars)] = ring.field.one()
        vectors.append(vec)
    vectors.extend(to_sparse(t) for t in target.generators)
    basis = buchberger(vectors, ring, rank_one=False)
    kernel = [
        from_sparse(vec, ring, m, offset=n)
        for vec in basis
        if all(pos >= n for pos, _ in vec)
    ]
    logger.debug("🧮 syzygy kernel: %d generators from %d rows", len(kernel), m)
    return Submodule(ring, m, kernel)
