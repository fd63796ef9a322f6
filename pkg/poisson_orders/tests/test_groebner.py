import pytest
import sympy

from services.errors import InputError
from services.groebner import (
    Ideal,
    buchberger_criterion,
    eliminate,
    groebner_basis,
    ideal_contains,
    ideal_equal,
    ideal_intersect,
    ideal_member,
    ideal_product,
    ideal_quotient,
    ideal_sum,
    krull_dimension,
    normal_form,
    quotient_dimension,
    radical_member,
    saturation,
    standard_monomials,
)
from services.poly import PolynomialRing

CORPUS = [
    ("xyz", ["x^2 - y", "x*y - z"]),
    ("xyz", ["x*y - 1", "y*z - 1"]),
    ("xyz", ["x^2 + y^2 + z^2 - 1", "x - y", "y - z"]),
    ("xyz", ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"]),
    ("xy", ["x^2 + y^2 - 4", "x*y - 1"]),
    ("xy", ["x^4 - y^2", "x^3*y - 1/2*x"]),
    ("xyzw", ["x*w - y*z", "y^2 - x*z", "z^2 - y*w"]),
    ("xyz", ["x*y", "y*z", "x*z"]),
    ("xyz", ["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]),
    ("xy", ["3*x^2*y - y^3", "x^3 - 3*x*y^2"]),
    ("xy", ["x^3 - y", "y^2 - x"]),
    ("xyz", ["x - y^2", "y - z^2"]),
    ("xyz", ["x^2 - 1", "y^2 - 1", "z^2 - 1"]),
    ("xy", ["x^2*y - 1", "x*y^2 - x"]),
    ("xyz", ["x*y - z^2", "x*z - y^2", "y*z - x^2"]),
    ("xyzw", ["x - y - z", "w^2 - x*y", "z*w - 1"]),
    ("xyz", ["x^2 + y", "y^2 + z", "z^2 + x"]),
    ("xy", ["2*x^2 - 3*y", "x*y^2 - 5/3"]),
    ("xyz", ["x^2*y*z - 1", "x*y^2 - z"]),
    ("xyz", ["x*y*z", "x + y + z - 1"]),
]


def to_sympy(p, symbols):
    return sympy.expand(sympy.sympify(str(p).replace("^", "**"), locals={str(s): s for s in symbols}))


def sympy_basis(variables, generators, order):
    symbols = sympy.symbols(" ".join(variables))
    exprs = [sympy.sympify(g.replace("^", "**"), locals={str(s): s for s in symbols}) for g in generators]
    G = sympy.groebner(exprs, *symbols, order=order, domain="QQ")
    return symbols, G, {_scaled(sympy.Poly(g, *symbols, domain="QQ"), order) for g in G.exprs}


def _scaled(poly, order):
    # monic with respect to the leading term of the given order
    return sympy.expand(poly.as_expr() / poly.LC(order=order))


@pytest.mark.parametrize("variables, generators", CORPUS)
@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_reduced_basis_matches_sympy(variables, generators, order):
    ring = PolynomialRing(tuple(variables)).with_order("degrevlex" if order == "grevlex" else "lex")
    basis = Ideal(ring, generators).basis()
    symbols, _, expected = sympy_basis(variables, generators, order)
    assert {to_sympy(g, symbols) for g in basis} == expected
    assert buchberger_criterion(list(basis))


@pytest.mark.parametrize("variables, generators", CORPUS)
def test_membership_agrees_with_sympy(variables, generators, rng):
    ring = PolynomialRing(tuple(variables))
    I = Ideal(ring, generators)
    symbols, G, _ = sympy_basis(variables, generators, "grevlex")
    monomials = ring.monomials(2)
    for _ in range(10):
        f = ring.zero()
        for g in I.generators:
            for exp in rng.sample(monomials, 2):
                f = f + ring.monomial(exp, rng.randint(-3, 3)) * g
        if rng.random() < 0.5:
            f = f + ring.monomial(rng.choice(monomials), rng.randint(1, 3))
        assert ideal_member(f, I) == G.contains(to_sympy(f, symbols))


def random_polynomial(ring, rng, degree=3, terms=4):
    monomials = ring.monomials(degree)
    f = ring.zero()
    for exp in rng.sample(monomials, min(terms, len(monomials))):
        f = f + ring.monomial(exp, rng.randint(-4, 4))
    return f


@pytest.mark.parametrize("variables, generators", CORPUS)
@pytest.mark.parametrize("order", ["degrevlex", "lex"])
def test_groebner_basis_is_idempotent(variables, generators, order):
    ring = PolynomialRing(tuple(variables)).with_order(order)
    once = groebner_basis(Ideal(ring, generators))
    twice = groebner_basis(once)
    assert tuple(twice.basis()) == tuple(once.basis())
    assert tuple(Ideal(ring, list(once.basis())).basis()) == tuple(once.basis())


@pytest.mark.parametrize("variables, generators", CORPUS)
def test_normal_form_is_linear(variables, generators, rng):
    ring = PolynomialRing(tuple(variables))
    basis = Ideal(ring, generators).basis()
    for _ in range(5):
        f, g = random_polynomial(ring, rng), random_polynomial(ring, rng)
        a, b = rng.randint(-5, 5), rng.randint(1, 5)
        combined = normal_form(f.scale(a) + g.scale(b), basis)
        assert combined == normal_form(f, basis).scale(a) + normal_form(g, basis).scale(b)
        assert normal_form(normal_form(f, basis), basis) == normal_form(f, basis)


def test_normal_form_and_equality():
    R = PolynomialRing(("x", "y"))
    I = Ideal(R, ["x^2 - y", "y^2 - 1"])
    x, y = R.gens()
    assert normal_form(x ** 4, I.basis()) == 1
    assert ideal_equal(I, Ideal(R, ["x^2 - y", "x^4 - 1"]))
    assert I == groebner_basis(I, order="lex")
    assert Ideal(R, []).format() == "(0)"
    assert Ideal(R, ["x - 1", "x - 2"]).is_unit()


def test_sum_product_intersection_quotient():
    R = PolynomialRing(("x", "y"))
    I, J = Ideal(R, ["x"]), Ideal(R, ["y"])
    assert ideal_equal(ideal_intersect(I, J), Ideal(R, ["x*y"]))
    assert ideal_equal(ideal_product(I, J), Ideal(R, ["x*y"]))
    assert ideal_equal(ideal_sum(I, J), Ideal(R, ["x", "y"]))
    K = Ideal(R, ["x^2*y", "x*y^2"])
    assert ideal_equal(ideal_quotient(K, Ideal(R, ["x*y"])), Ideal(R, ["x", "y"]))
    assert ideal_equal(saturation(K, "x*y"), Ideal(R, [1]))
    assert ideal_equal(saturation(Ideal(R, ["x^2*y"]), "x"), Ideal(R, ["y"]))
    assert ideal_contains(I, ideal_product(I, J))
    assert not ideal_contains(ideal_product(I, J), I)


def test_eliminate():
    R = PolynomialRing(("t", "x", "y"))
    I = Ideal(R, ["x - t^2", "y - t^3"])
    kept = eliminate(I, ["t"])
    assert ideal_equal(kept, Ideal(R, ["x^3 - y^2"]))
    assert ideal_equal(eliminate(I, ["t"], order="lex"), kept)
    with pytest.raises(InputError):
        eliminate(I, ["x"], order="lex")


def test_radical_dimension_standard_monomials():
    R = PolynomialRing(("x", "y"))
    I = Ideal(R, ["x^2", "y^3"])
    assert radical_member("x", I)
    assert not radical_member("x + 1", I)
    assert krull_dimension(I) == 0
    assert quotient_dimension(I) == 6
    assert len(standard_monomials(I)) == 6
    assert krull_dimension(Ideal(R, ["x*y"])) == 1
    assert krull_dimension(Ideal(R, [])) == 2
    assert krull_dimension(Ideal(R, [1])) == -1
    with pytest.raises(InputError):
        standard_monomials(Ideal(R, ["x"]))
