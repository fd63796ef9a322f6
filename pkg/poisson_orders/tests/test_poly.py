from fractions import Fraction

import pytest

from services.errors import InputError
from services.field import CoefficientField
from services.poly import MonomialOrder, PolynomialRing


@pytest.fixture
def R():
    return PolynomialRing(("x", "y", "z"))


def test_parse_and_canonical_format(R):
    p = R.parse("3/2*x^2*y - 1 + 0*z")
    assert str(p) == "3/2*x^2*y - 1"
    assert str(R.parse("(x + y)^2")) == "x^2 + 2*x*y + y^2"
    assert str(R.parse("x**3 - -y")) == "x^3 + y"
    assert str(R.parse("-x*y/2")) == "-1/2*x*y"


def test_parse_errors_carry_positions(R):
    with pytest.raises(InputError) as info:
        R.parse("x + * y")
    assert info.value.code == "syntax"
    assert info.value.details["line"] == 1
    assert info.value.details["column"] >= 1


@pytest.mark.parametrize("text", ["w + 1", "x / y", "x^y", "d[x]", ""])
def test_parse_rejects(R, text):
    with pytest.raises(InputError):
        R.parse(text)


def test_arithmetic(R):
    x, y, z = R.gens()
    p = (x + y) * (x - y)
    assert p == x ** 2 - y ** 2
    assert p - p == 0
    assert (2 * x + Fraction(1, 3)).constant_value() == Fraction(1, 3)
    assert (x * y / 2).terms == {(1, 1, 0): Fraction(1, 2)}
    assert hash(x + y) == hash(y + x)


def test_derivative_gradient_evaluate(R):
    p = R.parse("x^2*y + 3*z")
    assert p.derivative("x") == R.parse("2*x*y")
    assert p.gradient() == [R.parse("2*x*y"), R.parse("x^2"), R.constant(3)]
    assert p.evaluate([1, 2, 3]) == 11


def test_default_ring_is_rational_degrevlex():
    R = PolynomialRing(("x", "y"))
    assert R.field.is_rational
    assert R.order.label == "degrevlex"
    assert R.with_order("lex").field == R.field
    assert PolynomialRing(("x",)).field == CoefficientField.rationals()


def test_orders():
    R = PolynomialRing(("x", "y", "z"))
    p = R.parse("x*z^2 + y^3 + x^2")
    assert p.leading_monomial() == (0, 3, 0)
    lex = R.with_order("lex")
    assert p.with_ring(lex).leading_monomial() == (2, 0, 0)
    deglex = R.with_order("deglex")
    assert p.with_ring(deglex).leading_monomial() == (1, 0, 2)


def test_monomials_are_sorted_largest_first(R):
    monomials = R.monomials(2)
    assert len(monomials) == 10
    assert monomials[-1] == (0, 0, 0)
    keys = [R.order.key(m) for m in monomials]
    assert keys == sorted(keys, reverse=True)


def test_block_order():
    order = MonomialOrder.from_name("block:1,2")
    assert order.label == "block:1,2"
    assert order.eliminates([0])
    assert not order.eliminates([1])
    with pytest.raises(InputError):
        PolynomialRing(("x", "y"), order=order)


@pytest.mark.parametrize("names", [("x", "x"), ("zeta",), ("1x",)])
def test_bad_variable_names(names):
    with pytest.raises(InputError):
        PolynomialRing(names)


def test_cyclotomic_coefficients():
    R = PolynomialRing(("u",), CoefficientField.cyclotomic(3))
    p = R.parse("zeta*u + 1")
    assert str(p) == "(zeta)*u + 1"
    assert p * p == R.parse("zeta^2*u^2 + 2*zeta*u + 1")
    assert str(R.parse("zeta^3*u")) == "u"


def test_mixed_rings_are_rejected(R):
    S = PolynomialRing(("a", "b"))
    with pytest.raises(InputError):
        R.gen(0) + S.gen(0)
