import pytest

from pigp.analysis import p_core
from pigp.construct import (
    abelian_group,
    are_isomorphic,
    cyclic_group,
    elementary_abelian,
    quaternion8,
    symmetric_group,
)
from pigp.errors import CapacityError
from pigp.group import all_normal_subgroups, quotient
from pigp.potential import (
    algorithm3_on_tame_quotient,
    is_potentially_realizable,
    semidirect_conjecture_holds,
    tame_pairs_mask,
    tame_potential_groups,
    tame_structures,
)


@pytest.mark.parametrize("G,p,expected", [
    (cyclic_group(12), 5, True),
    (elementary_abelian(2, 2), 3, True),   # sigma, tau of order 2 commute, tau^3 = tau
    (elementary_abelian(2, 2), 5, True),
    (elementary_abelian(2, 3), 3, False),  # needs three generators
    (elementary_abelian(3, 3), 3, True),   # a 3-group: V = G, T trivial
    (abelian_group([5, 5]), 3, False),     # tame part needs a cyclic tau with tau^3 = tau
    (quaternion8(), 3, True),
    (quaternion8(), 5, False),
    (symmetric_group(3), 5, True),         # tau^sigma = tau^5 = tau^-1
    (symmetric_group(3), 3, True),
    (symmetric_group(4), 3, False),        # trivial 3-core and not metacyclic
])
def test_screen_examples(G, p, expected):
    ok, ts = is_potentially_realizable(G, p)
    assert ok is expected
    if ok:
        assert ts.is_valid(p)
    else:
        assert ts is None


def test_screen_matches_exhaustive_search(entries):
    """The tame-quotient screen agrees with a search over all filtrations."""
    checked = 0
    for e in entries:
        G = e.group
        if G.order > 48:
            continue
        for p in (3, 5, 7):
            ok, _ = is_potentially_realizable(G, p)
            assert ok == bool(tame_structures(G, p)), (e.name, p)
            checked += 1
    assert checked > 300


def test_tame_structures_are_valid():
    G = symmetric_group(3)
    structs = tame_structures(G, 3)
    assert len(structs) >= 2 and all(s.is_valid(3) for s in structs)
    for s in structs:
        assert s.enlarged(3).is_valid(3)
    assert tame_structures(symmetric_group(4), 3) == []
    with pytest.raises(CapacityError):
        tame_structures(cyclic_group(300), 3)


def test_quotients_inherit_potential_realizability(entries):
    for e in entries:
        G = e.group
        if G.order > 40 or not is_potentially_realizable(G, 3, witness=False)[0]:
            continue
        for N in all_normal_subgroups(G):
            Q, _ = quotient(G, N)
            assert is_potentially_realizable(Q, 3, witness=False)[0], (e.name, N.order)


def test_tame_pairs_mask_definition():
    G = symmetric_group(3)
    M = tame_pairs_mask(G, 5)
    for s in range(6):
        for t in range(6):
            assert M[s, t] == (G.conj(t, s) == G.pow(t, 5))


def test_algorithm_on_trivial_core(entries):
    for e in entries:
        G = e.group
        if G.order > 30:
            continue
        for p in (3, 5):
            if p_core(G, p).order == 1:
                assert algorithm3_on_tame_quotient(G, p) == bool(tame_structures(G, p))


@pytest.mark.parametrize("n,p", [(12, 5), (20, 3), (21, 5), (40, 7), (42, 5), (56, 3)])
def test_tame_potential_groups_match_catalog(entries, n, p):
    found = tame_potential_groups(n, p)
    expected = [e.group for e in entries if e.group.order == n
                and p_core(e.group, p).order == 1 and is_potentially_realizable(e.group, p, witness=False)[0]]
    assert len(found) == len(expected)
    for H in expected:
        assert sum(are_isomorphic(H, F.group) for F in found) == 1


def test_semidirect_conjecture_examples(group):
    for name, p in [("D6", 3), ("F3^2:C4", 3), ("Dih-C5^2", 5), ("C6", 3)]:
        ok, H = semidirect_conjecture_holds(group(name), p)
        assert ok
        G = group(name)
        V = p_core(G, p)
        assert H.order * V.order == G.order
