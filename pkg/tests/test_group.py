import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pigp.construct import (
    abelian_group,
    cyclic_group,
    dihedral_group,
    quaternion8,
    symmetric_group,
)
from pigp.errors import CapacityError, PreconditionError, UsageError
from pigp.group import (
    Group,
    all_normal_subgroups,
    check_axioms,
    element_arithmetic,
    generates,
    homomorphism_from_images,
    minimal_normal_subgroups,
    normal_closure,
    quotient,
    small_generating_set,
    subgroup_generated,
)


def test_table_validation():
    with pytest.raises(ValueError):
        Group(np.zeros((2, 3), dtype=int))
    with pytest.raises(ValueError):
        Group(np.array([[1, 0], [0, 1]]))  # identity not at 0
    with pytest.raises(CapacityError):
        Group(np.zeros((5000, 5000), dtype=np.int8))


def test_conventions_conj_and_comm():
    S3 = symmetric_group(3)
    for x in range(6):
        for y in range(6):
            yi = S3.inverse(y)
            assert S3.conj(x, y) == S3.mul(S3.mul(yi, x), y)
            assert S3.comm(x, y) == S3.mul(S3.mul(S3.inverse(x), yi), S3.mul(x, y))


def test_elem_arithmetic():
    G = dihedral_group(4)
    x, y = G.elem(1), G.elem(G.order - 1)
    assert (x * ~x) == G.identity
    assert (x ** x.order) == G.identity
    assert element_arithmetic(x, y, "mul") == x * y
    assert element_arithmetic(x, None, "inv") == ~x
    assert element_arithmetic(x, None, "pow", 3) == x ** 3
    assert element_arithmetic(x, y, "conj") == (~y) * x * y
    assert element_arithmetic(x, y, "comm") == (~x) * (~y) * x * y
    with pytest.raises(UsageError):
        element_arithmetic(x, None, "mul")
    with pytest.raises(UsageError):
        element_arithmetic(x, y, "frobnicate")


def test_elements_of_different_groups():
    a, b = cyclic_group(4).elem(1), cyclic_group(4).elem(1)
    with pytest.raises(UsageError):
        a * b
    with pytest.raises(UsageError):
        a.conj(b)


def test_element_orders_and_center():
    Q8 = quaternion8()
    assert sorted(Q8.element_orders.tolist()) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert Q8.center.order == 2
    assert not Q8.is_abelian
    assert cyclic_group(9).is_cyclic()
    assert not abelian_group([3, 3]).is_cyclic()


@pytest.mark.parametrize("make,expected", [
    (lambda: symmetric_group(3), 3),
    (lambda: dihedral_group(4), 6),
    (quaternion8, 6),
    (lambda: symmetric_group(4), 4),
    (lambda: abelian_group([2, 2]), 5),
])
def test_normal_subgroup_counts(make, expected):
    G = make()
    Ns = all_normal_subgroups(G)
    assert len(Ns) == expected
    assert all(N.is_normal() for N in Ns)


def test_minimal_normal_and_quotient():
    S4 = symmetric_group(4)
    (V4,) = minimal_normal_subgroups(S4)
    assert V4.order == 4
    Q, proj = quotient(S4, V4)
    assert Q.order == 6 and not Q.is_abelian
    assert proj.is_homomorphism() and proj.kernel().order == 4
    check_axioms(Q)
    # section picks the least element of each coset
    assert all(proj(int(Q.section[c])) == c for c in range(Q.order))
    with pytest.raises(PreconditionError):
        quotient(S4, subgroup_generated(S4, [1]))


def test_generation():
    S4 = symmetric_group(4)
    gens = small_generating_set(S4)
    assert len(gens) <= 2 and generates(S4, gens)
    assert subgroup_generated(S4, [0]).order == 1
    assert normal_closure(S4, [gens[0]]).is_normal()


def test_homomorphism_from_images():
    C12, C4 = cyclic_group(12), cyclic_group(4)
    f = homomorphism_from_images(C12, [1], [1], C4)
    assert f is not None and f.is_surjective() and f.kernel().order == 3
    assert homomorphism_from_images(C4, [1], [1], cyclic_group(3)) is None
    with pytest.raises(PreconditionError):
        homomorphism_from_images(C12, [2], [1], C4)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=3))
def test_abelian_tables_satisfy_axioms(factors):
    G = abelian_group(factors)
    assert G.order == int(np.prod(factors))
    check_axioms(G)
    assert G.is_abelian
    assert np.all(G.element_orders[1:] > 1)
