import pytest

from services.errors import InternalInvariantError
from services.groebner import Ideal, ideal_contains, ideal_equal, ideal_intersect
from services.ideals import (
    is_poisson_stable,
    maximal_ideal,
    poisson_closure,
    poisson_core,
    symplectic_core_ideal,
)
from services.poisson import PoissonAlgebra
from services.poly import PolynomialRing


@pytest.fixture
def z_squared():
    """{x, y} = z^2: Jacobi holds and the bracket is not linear."""
    ring = PolynomialRing(("x", "y", "z"))
    return PoissonAlgebra.from_upper(ring, {(0, 1): "z^2"})


@pytest.mark.parametrize(
    "point, expected",
    [((0, 0, 0), ["e", "h", "f"]), ((0, 0, 1), ["h^2 + 4*e*f"]), ((1, 0, 1), ["h^2 + 4*e*f - 4"])],
)
def test_sl2_symplectic_cores(sl2, point, expected):
    core = symplectic_core_ideal(point, sl2)
    assert ideal_equal(core, Ideal(sl2.ring, expected))


@pytest.mark.parametrize(
    "point, expected",
    [((1, 2, 3), ["z - 3"]), ((0, 5, -1), ["z + 1"]), ((1, 2, 0), ["x - 1", "y - 2", "z"])],
)
def test_heisenberg_symplectic_cores(heis, point, expected):
    assert ideal_equal(symplectic_core_ideal(point, heis), Ideal(heis.ring, expected))


def test_core_format(sl2):
    assert symplectic_core_ideal((0, 0, 1), sl2).format() == "(h^2 + 4*e*f)"


def test_solvable_cores(solvable):
    assert symplectic_core_ideal((1, 1), solvable).is_zero()
    assert ideal_equal(symplectic_core_ideal((3, 0), solvable), Ideal(solvable.ring, ["x - 3", "y"]))


def test_trivial_bracket_core_is_identity(trivial):
    I = Ideal(trivial.ring, ["x^2 - y", "z"])
    assert ideal_equal(poisson_core(I, trivial), I)


@pytest.fixture
def weights():
    """{x, z} = x, {y, z} = -3y: leaves through x*y != 0 are the levels of x^3*y."""
    ring = PolynomialRing(("x", "y", "z"))
    return PoissonAlgebra.from_upper(ring, {(0, 2): "x", (1, 2): "-3*y"})


def test_core_waits_for_a_degree_four_casimir(weights):
    I = maximal_ideal(weights.ring, (1, 1, 0))
    core = poisson_core(I, weights)
    assert core.format() == "(x^3*y - 1)"
    assert ideal_contains(core, Ideal(weights.ring, ["x^3*y - 1"]))
    assert is_poisson_stable(core, weights).is_poisson


def test_core_on_a_coordinate_plane_leaf(weights):
    assert ideal_equal(symplectic_core_ideal((1, 0, 0), weights), Ideal(weights.ring, ["y"]))
    assert ideal_equal(symplectic_core_ideal((0, 0, 4), weights), maximal_ideal(weights.ring, (0, 0, 4)))


def test_core_of_a_hyperplane_is_zero(heis):
    assert poisson_core(Ideal(heis.ring, ["x - 1"]), heis).is_zero()


@pytest.mark.parametrize(
    "name, point, subideals",
    [
        ("heis", (1, 2, 3), [["(z - 3)^2"], ["(z - 3)*(z - 5)"], ["z^2 - 9"], ["z - 3"], ["z*(z - 3)"]]),
        ("sl2", (1, 0, 1), [["(h^2 + 4*e*f - 4)^2"], ["(h^2 + 4*e*f - 4)*(h^2 + 4*e*f)"]]),
        ("weights", (1, 1, 0), [["(x^3*y - 1)^2"], ["(x^3*y - 1)*(x^3*y + 2)"]]),
    ],
)
def test_core_laws(name, point, subideals, request):
    P = request.getfixturevalue(name)
    I = maximal_ideal(P.ring, point)
    core = poisson_core(I, P)
    assert is_poisson_stable(core, P).is_poisson
    assert ideal_contains(I, core)
    for generators in subideals:
        J = Ideal(P.ring, generators)
        assert is_poisson_stable(J, P).is_poisson
        assert ideal_contains(I, J)
        assert ideal_contains(core, J)


def test_core_contains_poisson_subideals_for_a_quadratic_bracket(z_squared):
    I = Ideal(z_squared.ring, ["y", "z^3"])
    core = poisson_core(I, z_squared)
    for generators in (["z^3"], ["z^3", "y*z^2"]):
        J = Ideal(z_squared.ring, generators)
        assert is_poisson_stable(J, z_squared).is_poisson
        assert ideal_contains(core, J)


@pytest.mark.parametrize(
    "name, first, second",
    [
        ("heis", (1, 2, 3), (0, 0, 5)),
        ("heis", (1, 2, 0), (0, 0, 2)),
        ("heis", (1, 2, 3), (4, 5, 3)),
        ("heis", (0, 0, 0), (1, 1, 0)),
        ("sl2", (0, 0, 1), (1, 0, 1)),
        ("sl2", (0, 0, 0), (0, 0, 1)),
        ("sl2", (1, 0, 1), (0, 1, 0)),
        ("solvable", (1, 1), (3, 0)),
        ("solvable", (2, 5), (1, 1)),
        ("weights", (1, 1, 0), (1, 0, 0)),
    ],
)
def test_core_commutes_with_intersection(name, first, second, request):
    P = request.getfixturevalue(name)
    I, J = maximal_ideal(P.ring, first), maximal_ideal(P.ring, second)
    lhs = poisson_core(ideal_intersect(I, J), P)
    rhs = ideal_intersect(poisson_core(I, P), poisson_core(J, P))
    assert ideal_equal(lhs, rhs)


def test_differential_core_for_a_quadratic_bracket(z_squared):
    I = Ideal(z_squared.ring, ["y", "z^3"])
    assert not is_poisson_stable(I, z_squared).is_poisson
    core = poisson_core(I, z_squared)
    assert ideal_equal(core, Ideal(z_squared.ring, ["y^2", "y*z", "z^3"]))
    assert is_poisson_stable(core, z_squared).is_poisson


def test_differential_core_respects_the_round_cap(z_squared):
    with pytest.raises(InternalInvariantError):
        poisson_core(Ideal(z_squared.ring, ["y"]), z_squared, round_cap=3)


def test_stability_report_names_a_witness(heis):
    report = is_poisson_stable(Ideal(heis.ring, ["x - 1"]), heis)
    assert not report.is_poisson
    [(i, _, value)] = report.witnesses
    assert heis.variables[i] == "y"
    assert str(value) == "-z"


def test_closure(heis, sl2):
    assert ideal_equal(poisson_closure(Ideal(heis.ring, ["x - 1"]), heis), Ideal(heis.ring, ["x - 1", "z"]))
    assert ideal_equal(poisson_closure(Ideal(sl2.ring, ["e"]), sl2), Ideal(sl2.ring, ["e", "h", "f"]))
    casimir = Ideal(sl2.ring, ["h^2 + 4*e*f"])
    assert ideal_equal(poisson_closure(casimir, sl2), casimir)


def test_core_of_zero_and_unit(heis):
    assert poisson_core(Ideal(heis.ring, []), heis).is_zero()
    assert poisson_core(Ideal(heis.ring, [1]), heis).is_unit()
