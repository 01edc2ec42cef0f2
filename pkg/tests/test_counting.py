import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pigp.analysis import p_core
from pigp.automorphisms import abelian_automorphism_count, automorphism_group, orbit_codes
from pigp.construct import (
    abelian_group,
    cyclic_group,
    elementary_abelian,
    heisenberg_group,
    quaternion8,
    symmetric_group,
)
from pigp.counting import (
    YCache,
    _lattices,
    _vl,
    count,
    count_abelian,
    count_bruteforce,
    count_lifting,
    count_tame,
    enumerate_TG,
    is_realizable,
    paper_case,
    paper_case_count,
    quadruple_violations,
    shafarevich_count,
    tame_pairs_array,
)
from pigp.errors import CapacityError, PreconditionError, UsageError
from pigp.group import Group, generates


def _relabel(G, seed):
    rng = np.random.default_rng(seed)
    rel = np.concatenate([[0], 1 + rng.permutation(G.order - 1)])
    inv = np.argsort(rel)
    return Group(rel[G.table[np.ix_(inv, inv)]], [int(rel[g]) for g in G.gens], name=G.name + "'")


# -- documented small values --------------------------------------------------------

@pytest.mark.parametrize("G,p,expected,method", [
    (cyclic_group(1), 3, 1, "abelian"),
    (cyclic_group(2), 3, 3, "abelian"),
    (cyclic_group(3), 3, 4, "abelian"),
    (cyclic_group(6), 5, 3, "abelian"),
    (cyclic_group(7), 3, 1, "abelian"),
    (cyclic_group(9), 3, 12, "abelian"),
    (abelian_group([3, 9]), 3, 4, "abelian"),
    (elementary_abelian(3, 3), 3, 0, "abelian"),
    (abelian_group([7, 7]), 3, 0, "abelian"),
    (symmetric_group(3), 5, 1, "tame"),
    (symmetric_group(3), 3, 6, "lifting"),
    (heisenberg_group(3), 3, 1, "lifting"),
    (quaternion8(), 3, 1, "tame"),
    (quaternion8(), 5, 0, "tame"),
])
def test_known_counts(G, p, expected, method):
    res = count(G, p)
    assert res.count == expected
    assert res.method == method


def test_forced_branches_agree_on_small_cases():
    for G, p in [(cyclic_group(2), 3), (cyclic_group(3), 3), (elementary_abelian(3, 3), 3),
                 (cyclic_group(5), 5), (abelian_group([3, 9]), 3)]:
        assert count_abelian(G, p).count == count(G, p, method="lifting").count
    assert count_tame(cyclic_group(2), 3).count == 3


def test_enumerate_TG():
    assert len(enumerate_TG(cyclic_group(2), 3)) == 3
    assert len(enumerate_TG(symmetric_group(3), 5)) == 6
    assert len(enumerate_TG(cyclic_group(1), 3)) == 1
    pairs = tame_pairs_array(symmetric_group(3), 5)
    G = symmetric_group(3)
    for s, t in pairs:
        assert G.element_order(int(t)) == 3 and G.element_order(int(s)) == 2


def test_errors():
    with pytest.raises(PreconditionError):
        count(cyclic_group(3), 2)
    with pytest.raises(UsageError):
        count(cyclic_group(3), 3, method="magic")
    with pytest.raises(PreconditionError):
        count_abelian(symmetric_group(3), 3)
    with pytest.raises(PreconditionError):
        count_tame(symmetric_group(3), 3)
    with pytest.raises(PreconditionError):
        shafarevich_count(symmetric_group(3), 3)
    with pytest.raises(CapacityError):
        count_bruteforce(symmetric_group(5), 3)


def test_result_json_schema():
    res = count(symmetric_group(3), 3)
    d = json.loads(res.to_json())
    assert list(d) == ["group", "fingerprint", "p", "order", "method", "count",
                       "representatives", "seed_h", "millis"]
    assert d["count"] == len(d["representatives"]) == 6
    assert d["seed_h"] == 2 and d["order"] == 6


# -- oracles -------------------------------------------------------------------------

def test_against_bruteforce(entries):
    """Auto and forced lifting agree with the orbit-counting brute force on small groups."""
    checked = 0
    for e in entries:
        G = e.group
        if G.order > 40:
            continue
        for p in (3, 5, 7):
            want = count_bruteforce(G, p).count
            assert count(G, p).count == want, (e.name, p)
            if p_core(G, p).order > 1 and not G.is_abelian:
                assert count_lifting(G, p).count == want, (e.name, p)
            checked += 1
    assert checked > 250


@pytest.mark.parametrize("p", [3, 5])
def test_shafarevich_formula(entries, p):
    for e in entries:
        G = e.group
        n = G.order
        if n == 1 or n > 81 or p ** _vl(n, p) != n:
            continue
        f = shafarevich_count(G, p)
        assert f.denominator == 1
        assert count(G, p).count == f, e.name


def test_representatives_valid_and_orbits_disjoint(entries):
    for e in entries:
        G = e.group
        if G.order > 100:
            continue
        for p in (3, 5):
            res = count(G, p)
            if not res.count:
                continue
            for q in res.representatives:
                assert quadruple_violations(G, p, q) == [], (e.name, p, q)
            try:
                A = automorphism_group(G)
            except CapacityError:
                continue
            seen = set()
            for q in res.representatives:
                orb = set(orbit_codes(q, A).tolist())
                assert not orb & seen, (e.name, p)
                seen |= orb


@pytest.mark.parametrize("name,p", [("D6", 3), ("Heis3", 3), ("C3^2:C4", 3), ("Dic3", 3),
                                     ("A4", 3), ("C2^2:C9", 3), ("M4_5_0_2", 5), ("Dih-C5^2", 5)])
def test_isomorphism_invariance(group, name, p):
    G = group(name)
    H = _relabel(G, 7)
    assert count(G, p).count == count(H, p, cache=YCache()).count


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["D6", "D10", "Dic3", "A4", "C3:D6", "M6_3_0_2", "Q8:C3", "C2xC4:C2"]),
       st.sampled_from([3, 5, 7]), st.integers(0, 10 ** 6))
def test_isomorphism_invariance_property(entries, name, p, seed):
    from pigp.catalog import find_entry

    G = find_entry(entries, name).group
    assert count(G, p).count == count(_relabel(G, seed), p, cache=YCache()).count


@pytest.mark.parametrize("G,p,seeds", [
    (symmetric_group(3), 5, (2, 3)),
    (cyclic_group(50), 5, (2, 3)),
    (heisenberg_group(3), 3, (2, 5)),
    (cyclic_group(14), 7, (3, 5)),
])
def test_count_independent_of_root_of_unity(G, p, seeds):
    counts = {count(G, p, h_seed=s, cache=YCache()).count for s in seeds}
    assert len(counts) == 1


def test_is_realizable_matches_count(entries):
    for e in entries:
        G = e.group
        if G.order > 60:
            continue
        assert is_realizable(G, 3) == (count(G, 3).count > 0), e.name


def test_ycache_reuses_isomorphic_quotients():
    cache = YCache()
    G = symmetric_group(3)
    a = count(G, 3, method="lifting", cache=cache).count
    b = count(_relabel(G, 3), 3, method="lifting", cache=cache).count
    assert a == b == 6


# -- abelian closed form -------------------------------------------------------------

def _brute_c(ell, exps, p):
    """c_l as (generating pairs satisfying the constraint) / |Aut| on the l-part."""
    A = abelian_group([ell ** e for e in exps])
    n = A.order
    k = 0
    for s in range(n):
        for t in range(n):
            if ell != p and A.pow(t, p - 1):
                continue
            k += generates(A, [s, t])
    return k // abelian_automorphism_count({ell: list(exps)} if exps else {})


GRID = [(ell, exps, p) for p in (3, 5, 7, 13) for ell in (2, 3, 5, 7)
        for exps in ([1], [2], [3], [1, 1], [1, 2], [2, 2], [1, 3])
        if ell ** sum(exps) <= 200]


@pytest.mark.parametrize("ell,exps,p", GRID)
def test_lattice_count_is_c_ell(ell, exps, p):
    tau = None if ell == p else _vl(p - 1, ell)
    assert len(list(_lattices(ell, exps, tau))) == _brute_c(ell, exps, p)


# cases where the printed closed form disagrees with the enumeration
KNOWN_DIFFERENCES = {
    (3, (1, 2), 3): (2, 4),   # case 2: true value l^(b-a-1)(l+1)
    (3, (1, 3), 3): (2, 12),
    (5, (1, 2), 5): (2, 6),
    (2, (1, 2), 5): (2, 3),   # case 3
    (2, (1, 2), 13): (2, 3),
    (2, (1, 3), 5): (1, 2),   # case 5 with a <= v_l(p-1) < b
    (2, (1, 3), 13): (1, 2),
}


@pytest.mark.parametrize("ell,exps,p", GRID)
def test_printed_closed_form(ell, exps, p):
    true = _brute_c(ell, exps, p)
    printed = paper_case_count(ell, exps, p)
    key = (ell, tuple(exps), p)
    if key in KNOWN_DIFFERENCES:
        assert (printed, true) == KNOWN_DIFFERENCES[key]
    elif paper_case(ell, exps, p) in (2, 3, 5) and printed != true:
        pytest.fail(f"unrecorded difference {key}: printed {printed}, true {true}")
    else:
        assert printed == true


def test_abelian_cases_recorded():
    res = count_abelian(abelian_group([2, 9, 5]), 3)
    assert res.details["cases"] == {2: 8, 3: 7, 5: 9}
    assert res.count == 3 * 12 * 1


@pytest.mark.slow
def test_acceptance_sized_abelian_counts():
    assert count(cyclic_group(1458), 3).count == 2916
    assert count(cyclic_group(1210), 11).count == 2376
