import pytest

from services.errors import InputError, InternalInvariantError, ValidationFailure
from services.groebner import Ideal, ideal_equal
from services.ideals import maximal_ideal, poisson_core
from services.order import (
    OrderIdeal,
    PoissonOrder,
    algebra_as_order,
    check_biderivation,
    check_compatibility,
    contract_ideal,
    extend_ideal,
    is_azumaya,
    make_order,
    matrix_order,
    opposite_order,
    order_is_stable,
    order_poisson_core,
    order_violations,
    tensor_order,
)


def _vector(ring, *coords):
    return tuple(ring.coerce(c) for c in coords)


def _square_root_of_z(heis, ham_x=(0, 0)):
    """Z[t]/(t^2 - z) over the Heisenberg algebra; z is a Casimir."""
    ring = heis.ring
    one, t = _vector(ring, 1, 0), _vector(ring, 0, 1)
    mult = [[one, t], [t, _vector(ring, "z", 0)]]
    zero = _vector(ring, 0, 0)
    ham = [[zero, _vector(ring, *ham_x)], [zero, zero], [zero, zero]]
    return mult, one, ham


def test_matrix_orders_verify(mat2_sl2, mat2_heis):
    assert order_violations(mat2_sl2) == []
    assert order_violations(mat2_heis) == []
    assert mat2_heis.names == ("E11", "E12", "E21", "E22")
    assert mat2_heis.format_element(mat2_heis.unit) == "E11 + E22"


def test_algebra_is_a_rank_one_order(sl2):
    A = algebra_as_order(sl2)
    assert A.rank == 1
    assert order_violations(A) == []
    assert A.format_element(A.scalar("e + 1")) == "e + 1"


def test_opposite_and_tensor_orders(sl2, mat2_sl2):
    assert order_violations(opposite_order(mat2_sl2)) == []
    mat4 = tensor_order(mat2_sl2, matrix_order(sl2, 2))
    assert mat4.rank == 16
    assert order_violations(mat4) == []


def test_make_order_accepts_a_quadratic_extension(heis):
    mult, unit, ham = _square_root_of_z(heis)
    A = make_order(heis, mult, unit, ham, names=("1", "t"))
    t = A.basis_element(1)
    assert A.multiply(t, t) == A.scalar("z")


def test_unit_violation(heis):
    mult, _, ham = _square_root_of_z(heis)
    with pytest.raises(ValidationFailure) as info:
        make_order(heis, mult, _vector(heis.ring, 0, 1), ham)
    assert info.value.code == "unit"


def test_associativity_violation(mat2_heis):
    A = mat2_heis
    mult = [list(row) for row in A.mult]
    mult[A.index("E12")][A.index("E21")] = A.basis_element(A.index("E22"))
    with pytest.raises(ValidationFailure) as info:
        make_order(A.base, mult, A.unit, A.ham, names=A.names)
    assert info.value.code == "associativity"


def test_derivation_violation(heis):
    mult, unit, ham = _square_root_of_z(heis, ham_x=(1, 0))
    with pytest.raises(ValidationFailure) as info:
        make_order(heis, mult, unit, ham)
    assert info.value.code == "derivation"
    assert info.value.details["indices"] == [0, 1, 1]


def test_compatibility_violation(heis):
    mult, unit, ham = _square_root_of_z(heis)
    ham[1][0] = _vector(heis.ring, 0, 1)
    A = PoissonOrder(heis, ("1", "t"), mult, unit, ham)
    (violation,) = check_compatibility(A)
    assert violation.indices == (1,)
    assert violation.to_dict()["axiom"] == "compatibility"


def test_biderivation_holds_for_coordinate_tables(mat2_heis, heis):
    assert check_biderivation(mat2_heis) == []
    mult, unit, ham = _square_root_of_z(heis, ham_x=(1, 0))
    assert check_biderivation(PoissonOrder(heis, ("1", "t"), mult, unit, ham)) == []


def test_table_shapes_are_checked(heis):
    mult, unit, ham = _square_root_of_z(heis)
    with pytest.raises(InputError):
        PoissonOrder(heis, ("1", "t"), mult[:1], unit, ham)
    with pytest.raises(InputError):
        PoissonOrder(heis, ("1", "1"), mult, unit, ham)
    with pytest.raises(InputError):
        matrix_order(heis, 0)


def test_extend_then_contract(mat2_heis, heis):
    I = maximal_ideal(heis.ring, (1, 2, 3))
    J = extend_ideal(I, mat2_heis)
    assert mat2_heis.scalar("x - 1") in J
    assert mat2_heis.basis_element(0) not in J
    assert ideal_equal(contract_ideal(J), I)


def test_order_ideal_generated_by_a_matrix_unit_is_everything(mat2_heis):
    J = OrderIdeal(mat2_heis, [mat2_heis.basis_element(mat2_heis.index("E11"))])
    assert J.is_unit()
    assert order_is_stable(J)
    assert order_poisson_core(J) is J


@pytest.mark.parametrize(
    "name, point, expected",
    [
        ("mat2_heis", (1, 2, 3), ["z - 3"]),
        ("mat2_heis", (0, 0, -2), ["z + 2"]),
        ("mat2_heis", (1, 2, 0), ["x - 1", "y - 2", "z"]),
        ("mat2_sl2", (0, 0, 1), ["h^2 + 4*e*f"]),
        ("mat2_sl2", (1, 0, 1), ["h^2 + 4*e*f - 4"]),
        ("mat2_sl2", (0, 0, 0), ["e", "h", "f"]),
    ],
)
def test_order_core_and_contraction(name, point, expected, request):
    A = request.getfixturevalue(name)
    J = extend_ideal(maximal_ideal(A.ring, point), A)
    core = order_poisson_core(J, A)
    assert order_is_stable(core)
    assert core == extend_ideal(Ideal(A.ring, expected), A)
    assert ideal_equal(contract_ideal(core), poisson_core(contract_ideal(J), A.base))


def test_order_core_rejects_foreign_ideals(mat2_heis, mat2_sl2):
    J = extend_ideal(maximal_ideal(mat2_sl2.ring, (0, 0, 0)), mat2_sl2)
    with pytest.raises(InputError):
        order_poisson_core(J, mat2_heis)


def _diagonal(heis):
    """Z x Z: two orthogonal idempotents and no Hamiltonian correction."""
    ring = heis.ring
    e1, e2, zero = _vector(ring, 1, 0), _vector(ring, 0, 1), _vector(ring, 0, 0)
    return PoissonOrder(heis, ("e1", "e2"), [[e1, zero], [zero, e2]], _vector(ring, 1, 1), [[zero, zero]] * 3)


def test_azumaya_orders(sl2, heis, mat2_sl2):
    assert is_azumaya(mat2_sl2)
    assert is_azumaya(opposite_order(mat2_sl2))
    assert is_azumaya(algebra_as_order(sl2))
    assert not is_azumaya(_diagonal(heis))
    mult, unit, ham = _square_root_of_z(heis)
    assert not is_azumaya(PoissonOrder(heis, ("1", "t"), mult, unit, ham))


def test_rank_one_order_core_is_the_algebra_core(sl2):
    A = algebra_as_order(sl2)
    for point in [(0, 0, 1), (1, 0, 1), (0, 1, 0), (2, 0, 0), (1, 1, 1)]:
        J = extend_ideal(maximal_ideal(sl2.ring, point), A)
        core = order_poisson_core(J)
        assert ideal_equal(contract_ideal(core), poisson_core(maximal_ideal(sl2.ring, point), sl2))


def test_order_core_outside_azumaya_orders_runs_the_differential_iteration(heis):
    A = _diagonal(heis)
    assert order_violations(A) == []
    J = extend_ideal(maximal_ideal(heis.ring, (1, 2, 0)), A)
    assert order_poisson_core(J) is J
    J = extend_ideal(maximal_ideal(heis.ring, (1, 2, 3)), A)
    with pytest.raises(InternalInvariantError) as info:
        order_poisson_core(J, round_cap=3)
    assert info.value.code == "round_cap"
