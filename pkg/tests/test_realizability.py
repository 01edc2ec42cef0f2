import numpy as np
import pytest
import sympy
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings
from hypothesis import strategies as st

from pigp.analysis import frattini_of_pcore
from pigp.construct import abelian_group, cyclic_group, symmetric_group
from pigp.errors import CapacityError, PreconditionError
from pigp.group import quotient
from pigp.potential import is_potentially_realizable
from pigp.realizability import (
    analyse,
    decompose,
    inverse,
    is_irreducible,
    minimally_unrealizable_scan,
    nullspace,
    predicates_ss_td_xc,
    rank,
    rref,
    thm_converse_realizable,
    thm_multiplicity_unrealizable,
    vw_module,
)


# -- linear algebra over F_p -----------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 5), st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_rank_and_nullspace_match_sympy(p, r, c, seed):
    M = np.random.default_rng(seed).integers(0, p, size=(r, c))
    dm = DomainMatrix.from_list_sympy(r, c, M.tolist()).convert_to(sympy.GF(p))
    assert rank(M, p) == dm.rank()
    N = nullspace(M, p)
    assert N.shape[0] == c - rank(M, p)
    if N.size:
        assert not np.any((M @ N.T) % p)
    R, piv = rref(M, p)[:2]
    assert len(piv) == rank(M, p)


def test_inverse():
    M = np.array([[1, 2], [3, 4]])
    Mi = inverse(M, 7)
    assert np.array_equal((M @ Mi) % 7, np.eye(2, dtype=int))


# -- decomposition -----------------------------------------------------------------

def test_decompose_examples():
    C4 = np.array([[0, 1], [2, 0]])  # order 4 over F_3, irreducible (x^2 + 1)
    d = decompose([C4], 3, 2)
    assert d.shape() == "2" and d.classes[0]["irreducible"]
    d = decompose([-np.eye(2, dtype=int)], 5, 2)
    assert d.shape() == "1^2" and d.n == 2
    d = decompose([np.eye(3, dtype=int)], 3, 3)
    assert d.shape() == "1^3"
    J = np.array([[1, 1], [0, 1]])
    d = decompose([J], 3, 2)
    assert d.shape() == "2" and d.classes[0]["irreducible"] is False
    d = decompose([np.diag([1, 2])], 5, 2)
    assert d.shape() == "1 ⊕ 1" and d.multiplicity_free
    with pytest.raises(CapacityError):
        decompose([np.eye(9, dtype=int)], 3, 9)


def _random_invertible(k, p, rng):
    while True:
        P = rng.integers(0, p, size=(k, k))
        if rank(P, p) == k:
            return P


@pytest.mark.parametrize("mats,p", [
    ([np.diag([1, 1, 2])], 3),
    ([np.array([[1, 1, 0], [0, 1, 0], [0, 0, 2]])], 3),
    ([np.array([[0, 1], [4, 0]]), np.diag([1, 1])], 5),
    ([np.diag([2, 2, 3, 3])], 5),
    ([np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])], 7),
])
def test_decomposition_invariant_under_change_of_basis(mats, p):
    k = mats[0].shape[0]
    base = decompose(mats, p, k).signature()
    rng = np.random.default_rng(k * p)
    for _ in range(5):
        P = _random_invertible(k, p, rng)
        Pi = inverse(P, p)
        conj = [(P @ M @ Pi) % p for M in mats]
        assert decompose(conj, p, k).signature() == base


def test_irreducibility():
    assert is_irreducible([np.array([[0, 1], [2, 0]])], 2, 3)
    assert not is_irreducible([np.eye(2, dtype=int)], 2, 3)


def test_vw_module(group):
    M = vw_module(group("F3^2:C4"), 3)
    assert M.dim == 2 and M.T.order == 4
    M.check()
    assert vw_module(cyclic_group(27), 3).dim == 1
    assert vw_module(symmetric_group(3), 5).dim == 0


# -- Table 3 rows at desk scale ---------------------------------------------------------

# (name, p, V shape, SS, TD, XC); TD uses the literal quantification over T_G
TABLE = [
    ("C3^3", 3, "1^3", False, True, True),
    ("F3^2:C4", 3, "1^2", True, True, True),
    ("Dih-C3^3", 3, "1^3", True, False, False),
    ("F3^2:D8", 3, "1^2", True, True, True),
    ("Dih-C9^2", 3, "1^2", True, False, False),
    ("Dih-C5^2", 5, "1^2", True, False, True),   # table: TD = Y
    ("C5^3", 5, "1^3", False, True, True),
    ("F5^2:C8", 5, "1^2", True, False, True),    # table: TD = Y
    ("Dih-C7^2", 7, "1^2", True, False, True),   # table: TD = Y
    ("F7^2:C3", 7, "1^2", True, False, True),    # table: TD = Y
]


@pytest.mark.parametrize("name,p,shape,ss,td,xc", TABLE)
def test_table_rows(group, name, p, shape, ss, td, xc):
    rep = analyse(group(name), p)
    assert rep.potential and rep.count == 0
    assert rep.shape == shape
    assert (rep.ss, rep.td, rep.xc) == (ss, td, xc)
    # the multiplicity criterion explains every row except the exponent-9 one
    assert rep.thm_multiplicity == (name != "Dih-C9^2")


@pytest.mark.parametrize("p,bound,expected", [
    (3, 72, ["C3^3", "F3^2:C4", "Dih-C3^3", "F3^2:D8"]),
    (5, 200, ["Dih-C5^2", "C5^3", "F5^2:C8"]),
    (7, 200, ["Dih-C7^2", "F7^2:C3"]),
])
def test_minimally_unrealizable_scan(entries, p, bound, expected):
    found = [e.name for e in minimally_unrealizable_scan(entries, p, bound)]
    assert sorted(found) == sorted(expected)


# -- predicates and theorems -----------------------------------------------------------

# The literal SS clause compares orders in G with orders in G/V, so a lift of
# sigma whose extra power lies in W breaks it in G but not in G/W.
SS_NOT_W_INVARIANT = {("C3^2:D6", 3)}


def test_predicates_preserved_by_quotient_by_W(entries):
    checked, ss_diff = 0, set()
    for e in entries:
        G = e.group
        if G.order > 100:
            continue
        for p in (3, 5):
            if not is_potentially_realizable(G, p, witness=False)[0]:
                continue
            W = frattini_of_pcore(G, p)
            if W.order == 1:
                continue
            Q, _ = quotient(G, W)
            a, b = predicates_ss_td_xc(G, p), predicates_ss_td_xc(Q, p)
            assert (a.td, a.xc) == (b.td, b.xc), (e.name, p)
            if a.ss != b.ss:
                ss_diff.add((e.name, p))
                assert not a.ss and b.ss  # only ever weaker on G
                # the multiplicity verdict does not change
                dec = decompose(vw_module(G, p))
                assert thm_multiplicity_unrealizable(G, p, a, dec) == thm_multiplicity_unrealizable(G, p, b, dec)
            checked += 1
    assert checked >= 20
    assert ss_diff == SS_NOT_W_INVARIANT


def test_theorem_preconditions():
    with pytest.raises(PreconditionError):
        thm_multiplicity_unrealizable(abelian_group([7, 7]), 3)
    with pytest.raises(PreconditionError):
        thm_converse_realizable(abelian_group([7, 7]), 3)


def test_converse_theorem_examples(group):
    assert thm_converse_realizable(cyclic_group(3), 3)  # V = F_3, W = 1
    assert thm_converse_realizable(group("F3^2:Q8"), 3)  # Q8 irreducible on F_3^2
    assert not thm_converse_realizable(cyclic_group(9), 3)  # W nontrivial
    assert not thm_converse_realizable(group("C3^3"), 3)


def test_report_json(group):
    import json

    d = json.loads(analyse(group("Dih-C3^3"), 3).to_json())
    assert d["shape"] == "1^3" and d["count"] == 0
    assert set(d["witnesses"]) <= {"ss", "td", "xc"}
