from services.groebner import Ideal
from services.modules import Submodule, module_member, submodule_equal, syzygy_kernel, unit_vector
from services.poly import PolynomialRing


def test_submodule_membership():
    R = PolynomialRing(("x", "y"))
    x, y = R.gens()
    S = Submodule(R, 2, [(x, y), (y, R.zero())])
    assert module_member((x * y, y * y), S)
    assert module_member((x * x + y * y, x * y), S)
    assert not module_member(unit_vector(R, 2, 0), S)
    assert Submodule(R, 2, []).format() == "<0>"


def test_syzygies_of_two_variables():
    R = PolynomialRing(("x", "y"))
    x, y = R.gens()
    kernel = syzygy_kernel([(x,), (y,)], Ideal(R, []))
    assert submodule_equal(kernel, Submodule(R, 2, [(y, -x)]))


def test_kernel_modulo_an_ideal():
    R = PolynomialRing(("x", "y"))
    x, y = R.gens()
    # g * x lies in (x*y) exactly when g lies in (y)
    kernel = syzygy_kernel([(x,)], Ideal(R, ["x*y"]))
    assert submodule_equal(kernel, Submodule(R, 1, [(y,)]))
