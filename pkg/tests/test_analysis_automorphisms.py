import numpy as np
import pytest

from pigp.analysis import (
    abelian_type,
    decompose_structure,
    derived_series,
    frattini_of_pcore,
    invariant_factors,
    p_core,
    p_part,
    sylow_subgroup,
    tame_quotient,
)
from pigp.automorphisms import (
    abelian_automorphism_count,
    automorphism_group,
    automorphism_group_order,
    induced_automorphisms,
    induced_coset_reps,
    inner_automorphisms,
    orbit_codes,
    pack,
    stabilizer_of_subgroup,
    tuple_orbit,
    unpack,
)
from pigp.construct import (
    abelian_group,
    cyclic_group,
    dihedral_group,
    elementary_abelian,
    heisenberg_group,
    quaternion8,
    symmetric_group,
)
from pigp.errors import CapacityError, PreconditionError
from pigp.group import minimal_normal_subgroups


def test_series_and_sylow():
    S4 = symmetric_group(4)
    assert derived_series(S4) == [24, 12, 4, 1]
    assert sylow_subgroup(S4, 2).order == 8
    assert sylow_subgroup(S4, 3).order == 3
    assert p_core(S4, 2).order == 4 and p_core(S4, 3).order == 1
    assert p_part(72, 3) == (2, 9)


def test_frattini_of_pcore():
    H = heisenberg_group(3)
    d = decompose_structure(H, 3)
    assert d.V.order == 27 and d.W.order == 3 and d.T.order == 1
    assert frattini_of_pcore(elementary_abelian(3, 3), 3).order == 1
    assert frattini_of_pcore(cyclic_group(27), 3).order == 9
    T, proj = tame_quotient(symmetric_group(3), 3)
    assert T.order == 2 and proj.is_surjective()


def test_abelian_type():
    assert abelian_type(abelian_group([3, 9, 4])) == {2: [2], 3: [1, 2]}
    assert invariant_factors({2: [2], 3: [1, 2]}) == [3, 36]
    with pytest.raises(PreconditionError):
        abelian_type(symmetric_group(3))


@pytest.mark.parametrize("make,order", [
    (lambda: cyclic_group(12), 4),
    (lambda: abelian_group([2, 2]), 6),
    (lambda: symmetric_group(3), 6),
    (lambda: dihedral_group(4), 8),
    (quaternion8, 24),
    (lambda: symmetric_group(4), 24),
    (lambda: heisenberg_group(3), 432),
    (lambda: elementary_abelian(3, 2), 48),
])
def test_automorphism_group_orders(make, order):
    G = make()
    A = automorphism_group(G)
    assert A.order == order == automorphism_group_order(G)
    A.verify_closed(sample=200)
    # every row is a bijective homomorphism
    for row in A.maps[:20]:
        assert np.array_equal(np.sort(row), np.arange(G.order))
        assert np.array_equal(row[G.table], G.table[np.ix_(row, row)])


def test_abelian_aut_formula_matches_enumeration():
    for fs in ([2, 4], [3, 9], [2, 2, 2], [4, 4], [3, 3, 3], [2, 6], [5, 5]):
        G = abelian_group(fs)
        assert abelian_automorphism_count(G.primary_decomposition) == automorphism_group(G, bound=20000).order
    # beyond the enumeration bound only the formula is available
    assert automorphism_group_order(elementary_abelian(3, 4)) == 24261120
    with pytest.raises(CapacityError):
        automorphism_group(elementary_abelian(3, 4))


def test_inner_and_stabilizer():
    S3 = symmetric_group(3)
    inn = np.unique(inner_automorphisms(S3), axis=0)
    assert inn.shape[0] == 6
    G = dihedral_group(4)
    A = automorphism_group(G)
    (N,) = minimal_normal_subgroups(G)
    S = stabilizer_of_subgroup(A, N)
    assert S.order == A.order  # the centre is characteristic


def test_induced_coset_reps_partition():
    G = elementary_abelian(3, 2)
    N = minimal_normal_subgroups(G)[0]
    Q, H = induced_automorphisms(G, N)
    reps = induced_coset_reps(G, N)
    assert len(reps) * H.shape[0] == automorphism_group(Q).order
    assert np.array_equal(reps[0], np.arange(Q.order))


def test_pack_unpack_and_orbits():
    G = quaternion8()
    A = automorphism_group(G)
    q = np.array([[1, 2, 3, 4], [7, 0, 5, 6]])
    assert np.array_equal(unpack(pack(q, 8), 8), q)
    orb = tuple_orbit((1, 4), A)
    assert len(orb) == 24  # Aut(Q8) acts regularly on generating pairs
    codes = orbit_codes((1, 4, 0, 0), A)
    assert len(set(codes.tolist())) == 24
