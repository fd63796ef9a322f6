import pytest

from services.errors import InputError, InternalInvariantError
from services.field import CoefficientField
from services.poisson import jacobi_check
from services.semiclassical import (
    LaurentPolynomial,
    QuantumAffineSpace,
    centrality_check,
    ell_centre_bracket,
    q_commutator,
    q_mul,
    semiclassical_bracket,
)


@pytest.fixture
def qplane():
    return QuantumAffineSpace(2)


def test_generators_q_commute(qplane):
    x1, x2 = qplane.gen(0), qplane.gen(1)
    assert q_mul(x1, x2, qplane) == {(1, 1): LaurentPolynomial({0: 1})}
    assert q_mul(x2, x1, qplane) == {(1, 1): LaurentPolynomial.q_power(1)}
    assert qplane.format(q_mul(x2, x1, qplane)) == "(q)*X_1*X_2"


def test_squares_commutator(qplane):
    squares = [qplane.power(qplane.gen(i), 2) for i in range(2)]
    commutator = q_commutator(squares[0], squares[1], qplane)
    assert commutator == {(2, 2): LaurentPolynomial({0: 1, 4: -1})}
    assert commutator[(2, 2)].format() == "-q^4 + 1"


def test_q_mul_is_associative():
    Q = QuantumAffineSpace(3)
    u = Q.element({(1, 0, 2): LaurentPolynomial({1: 2}), (0, 1, 0): LaurentPolynomial({0: -1})})
    v = Q.element({(2, 1, 0): LaurentPolynomial({0: 1, 2: 3})})
    w = Q.element({(0, 0, 1): LaurentPolynomial({-1: 1}), (1, 1, 1): LaurentPolynomial({0: 5})})
    assert q_mul(q_mul(u, v, Q), w, Q) == q_mul(u, q_mul(v, w, Q), Q)


def test_laurent_evaluation_and_division():
    two = CoefficientField.cyclotomic(2)
    assert LaurentPolynomial({4: 1}).evaluate(two) == 1
    assert LaurentPolynomial({0: 1, 4: -1}).divide_at(two) == 4
    assert LaurentPolynomial({-1: 1, 0: 1}).divide_at(two) == -1
    assert LaurentPolynomial().divide_at(two) == 0
    with pytest.raises(InternalInvariantError):
        LaurentPolynomial({0: 1, 1: -1}).divide_at(CoefficientField.cyclotomic(3))


@pytest.mark.parametrize("ell", [2, 3, 4, 5])
def test_semiclassical_bracket_on_the_plane(qplane, ell):
    P = ell_centre_bracket(qplane, ell)
    ring = P.ring
    field = ring.field
    assert ring.variables == ("u_1", "u_2")
    expected = ring.monomial((1, 1)) * (field.coerce(-ell * ell) * field.zeta() ** -1)
    assert P.table[0][1] == expected
    assert P.table[1][0] == -expected
    assert jacobi_check(P).ok


@pytest.mark.parametrize("ell", [2, 3])
def test_semiclassical_bracket_in_three_variables(ell):
    P = ell_centre_bracket(QuantumAffineSpace(3), ell)
    assert jacobi_check(P).ok
    assert set(P.upper_entries()) == {(0, 1), (0, 2), (1, 2)}


def test_formatted_brackets(qplane):
    assert ell_centre_bracket(qplane, 2).table[0][1].format() == "4*u_1*u_2"
    assert ell_centre_bracket(qplane, 3).table[0][1].format() == "(9*zeta + 9)*u_1*u_2"


def test_bracket_needs_l_th_powers(qplane):
    with pytest.raises(InputError):
        semiclassical_bracket(qplane.gen(0), qplane.gen(1), qplane, 2)


@pytest.mark.parametrize("ell", [2, 3, 4])
def test_powers_are_central_at_roots_of_unity(qplane, ell):
    report = centrality_check(qplane, ell)
    assert report.ok
    assert report.specialized


def test_powers_are_not_central_for_generic_q(qplane):
    report = centrality_check(qplane, 2, specialize=False)
    assert not report.ok
    assert report.to_dict()["failures"] == [
        {"pair": [0, 1], "coefficient": "-q^2 + 1"},
        {"pair": [1, 0], "coefficient": "q^2 - 1"},
    ]
    assert centrality_check(QuantumAffineSpace(1), 3, specialize=False).ok


@pytest.mark.parametrize("ell", [1, 0, -2, 13])
def test_ell_out_of_range(qplane, ell):
    with pytest.raises(InputError) as info:
        ell_centre_bracket(qplane, ell)
    assert info.value.code == "ell"


def test_bad_spaces():
    with pytest.raises(InputError):
        QuantumAffineSpace(0)
    with pytest.raises(InputError):
        QuantumAffineSpace(2).gen(2)
