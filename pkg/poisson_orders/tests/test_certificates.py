from fractions import Fraction

import pytest

from services.certificates import (
    certify_core,
    irreducible_factors,
    is_certified_prime,
    prime_components,
    rational_points,
    sample_points,
    swept_rank,
)
from services.field import CoefficientField
from services.groebner import Ideal, ideal_equal, ideal_intersect
from services.ideals import maximal_ideal
from services.poisson import PoissonAlgebra
from services.poly import PolynomialRing


@pytest.fixture
def weights():
    ring = PolynomialRing(("x", "y", "z"))
    return PoissonAlgebra.from_upper(ring, {(0, 2): "x", (1, 2): "-3*y"})


def test_certified_primes(heis):
    ring = heis.ring
    assert is_certified_prime(Ideal(ring, []))
    assert is_certified_prime(Ideal(ring, ["x - 1", "y + z"]))
    assert is_certified_prime(Ideal(ring, ["x^3*y - 1"]))
    assert not is_certified_prime(Ideal(ring, ["x^2 - 1"]))
    assert not is_certified_prime(Ideal(ring, ["z^2"]))
    assert not is_certified_prime(Ideal(ring, ["x^2", "y"]))
    assert not is_certified_prime(Ideal(ring, [1]))


def test_irreducible_factors(heis):
    ring = heis.ring
    factors = irreducible_factors(ring.parse("x^2*z - z"))
    assert sorted(str(g) for g, _ in factors) == ["x + 1", "x - 1", "z"]
    assert all(k == 1 for _, k in factors)
    cyclotomic = PolynomialRing(("u",), CoefficientField.cyclotomic(3))
    assert irreducible_factors(cyclotomic.parse("u^2 - 1")) is None


def test_rational_points_of_two_points(heis):
    I = ideal_intersect(maximal_ideal(heis.ring, (1, 2, 3)), maximal_ideal(heis.ring, (0, 0, 5)))
    assert rational_points(I) == [(0, 0, 5), (1, 2, 3)]
    assert rational_points(Ideal(heis.ring, ["x^2 - 2", "y", "z"])) == []


def test_prime_components(heis):
    ring = heis.ring
    parts = prime_components(Ideal(ring, ["(x - 1)*(y - 2)"]))
    assert sorted(I.format() for I in parts) == ["(x - 1)", "(y - 2)"]
    I = ideal_intersect(maximal_ideal(ring, (1, 2, 3)), maximal_ideal(ring, (0, 0, 5)))
    parts = prime_components(I)
    assert len(parts) == 2
    assert any(ideal_equal(C, maximal_ideal(ring, (1, 2, 3))) for C in parts)
    assert prime_components(Ideal(ring, ["x^2", "y", "z"])) is None
    assert prime_components(Ideal(ring, ["(x - 1)^2"])) is None


def test_sample_points_lie_on_the_variety(heis):
    ring = heis.ring
    for generators in (["x - 1"], ["x + y - 2", "z - 3"], ["x*z - y^2"], []):
        C = Ideal(ring, generators)
        points = list(sample_points(C))
        assert points
        for point in points:
            assert all(not g.evaluate(point) for g in C.basis())


def test_swept_rank(heis, weights):
    assert swept_rank(maximal_ideal(heis.ring, (1, 2, 3)), heis, (1, 2, 3)) == 2
    assert swept_rank(maximal_ideal(heis.ring, (1, 2, 0)), heis, (1, 2, 0)) == 0
    one = Fraction(1)
    assert swept_rank(Ideal(heis.ring, ["x - 1"]), heis, (one, one, one)) == 3
    assert swept_rank(maximal_ideal(weights.ring, (1, 1, 0)), weights, (1, 1, 0)) == 2


def test_certificate_rejects_a_truncated_core(weights):
    ring = weights.ring
    C = maximal_ideal(ring, (1, 1, 0))
    assert not certify_core(C, Ideal(ring, []), weights)
    assert certify_core(C, Ideal(ring, ["x^3*y - 1"]), weights)
    assert not certify_core(C, Ideal(ring, ["(x^3*y - 1)^2"]), weights)


def test_certificate_for_a_leaf_through_a_hyperplane(heis):
    ring = heis.ring
    assert certify_core(Ideal(ring, ["x - 1"]), Ideal(ring, []), heis)
    assert certify_core(maximal_ideal(ring, (1, 2, 3)), Ideal(ring, ["z - 3"]), heis)
    assert not certify_core(maximal_ideal(ring, (1, 2, 3)), Ideal(ring, ["(z - 3)*(z - 4)"]), heis)
