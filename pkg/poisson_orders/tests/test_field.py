from fractions import Fraction

import pytest
from sympy import Poly, Symbol, cyclotomic_poly

from services.errors import InputError
from services.field import CoefficientField


@pytest.mark.parametrize("ell", [2, 3, 4, 5, 6, 12])
def test_zeta_is_a_primitive_root_of_unity(ell):
    field = CoefficientField.cyclotomic(ell)
    zeta = field.zeta()
    assert zeta ** ell == field.one()
    for k in range(1, ell):
        assert zeta ** k != field.one()


@pytest.mark.parametrize("ell", [3, 5, 8])
def test_modulus_matches_sympy(ell):
    t = Symbol("t")
    expected = tuple(Fraction(int(c)) for c in reversed(Poly(cyclotomic_poly(ell, t), t).all_coeffs()))
    assert CoefficientField.cyclotomic(ell).modulus == expected


def test_inverse_and_division():
    field = CoefficientField.cyclotomic(5)
    zeta = field.zeta()
    a = zeta * 3 + 1
    assert a * a.inverse() == field.one()
    assert (a / a) == 1
    assert zeta ** -1 == zeta ** 4


def test_third_roots_satisfy_the_minimal_polynomial():
    zeta = CoefficientField.cyclotomic(3).zeta()
    assert zeta * zeta + zeta + 1 == 0
    assert 1 - zeta ** 3 == 0


def test_format():
    field = CoefficientField.cyclotomic(5)
    zeta = field.zeta()
    assert (zeta * 9 + 9).format() == "9*zeta + 9"
    assert (-zeta ** 2 + Fraction(1, 2)).format() == "-zeta^2 + 1/2"
    assert field.coerce(7).format() == "7"


def test_rational_coercion():
    QQ = CoefficientField.rationals()
    assert QQ.coerce(3) == Fraction(3)
    assert QQ.coerce(CoefficientField.cyclotomic(3).coerce(2)) == 2
    with pytest.raises(InputError):
        QQ.coerce(CoefficientField.cyclotomic(3).zeta())
    with pytest.raises(InputError):
        QQ.zeta()


def test_mixing_fields_is_rejected():
    a = CoefficientField.cyclotomic(3).zeta()
    b = CoefficientField.cyclotomic(5).zeta()
    with pytest.raises(InputError):
        a + b


@pytest.mark.parametrize("name, expected", [("QQ", "rationals"), ("cyclotomic:4", "cyclotomic:4")])
def test_from_name(name, expected):
    assert CoefficientField.from_name(name).name == expected


def test_from_name_rejects_garbage():
    with pytest.raises(InputError):
        CoefficientField.from_name("reals")
    with pytest.raises(InputError):
        CoefficientField.from_name("cyclotomic:x")
