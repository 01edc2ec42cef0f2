"""Structural subgroups: p-core V, its Frattini subgroup W, derived subgroup,
Sylow subgroups and the tame quotient T = G/V.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy

from .errors import PreconditionError
from .group import Group, Homomorphism, Subgroup, normal_closure, quotient, subgroup_generated


def _memo(G: Group, key, fn):
    hit = G._cache.get(key)
    if hit is None:
        hit = fn()
        G._cache[key] = hit
    return hit


def derived_subgroup(G: Group) -> Subgroup:
    """Normal closure of the commutators of the generators."""
    def build():
        gens = G.gens
        comms = {G.comm(a, b) for a in gens for b in gens}
        return normal_closure(G, comms - {0})
    return _memo(G, "derived", build)


def derived_series(G: Group) -> list[int]:
    """Orders along the derived series until it stabilises."""
    orders = [G.order]
    H = G
    while True:
        D = derived_subgroup(H)
        if D.order == H.order:
            return orders
        orders.append(D.order)
        if D.order == 1:
            return orders
        H, _ = D.as_group()


def p_part(n: int, p: int) -> tuple[int, int]:
    """(r, p**r) with p**r the exact power of p dividing n."""
    r = 0
    while n % p == 0:
        n //= p
        r += 1
    return r, p ** r


def _conjugate_mask(G: Group, elems: np.ndarray, g: int) -> np.ndarray:
    t = G.table
    mask = np.zeros(G.order, dtype=bool)
    mask[t[G.inv[g], t[elems, g]]] = True
    return mask


def sylow_subgroup(G: Group, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown one normalising p-element at a time."""
    def build():
        _, target = p_part(G.order, p)
        ords = G.element_orders
        pelems = [x for x in range(G.order) if _is_p_power(int(ords[x]), p)]
        H = G.trivial
        while H.order < target:
            for x in pelems:
                if H.mask[x]:
                    continue
                if np.array_equal(_conjugate_mask(G, H.elements, x), H.mask):
                    H = subgroup_generated(G, list(H.generators()) + [x])
                    break
            else:  # pragma: no cover - Sylow theory guarantees progress
                raise RuntimeError("Sylow search stalled")
        return H
    return _memo(G, ("sylow", p), build)


def _is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def p_core(G: Group, p: int) -> Subgroup:
    """Largest normal p-subgroup: the intersection of all conjugates of a Sylow."""
    def build():
        P = sylow_subgroup(G, p)
        mask = P.mask.copy()
        for g in range(1, G.order):
            if mask.sum() == 1:
                break
            mask &= _conjugate_mask(G, P.elements, g)
        V = Subgroup(G, np.nonzero(mask)[0], _trusted=True)
        assert V.is_normal()
        return V
    return _memo(G, ("pcore", p), build)


def frattini_of_pcore(G: Group, p: int) -> Subgroup:
    """W = V^p V' for V the p-core."""
    def build():
        V = p_core(G, p)
        e = V.elements
        t, inv = G.table, G.inv
        gens = set()
        for v in e.tolist():
            gens.add(G.pow(v, p))
        comms = t[t[np.ix_(inv[e], inv[e])], t[np.ix_(e, e)]]
        gens.update(np.unique(comms).tolist())
        gens.discard(0)
        W = subgroup_generated(G, sorted(gens))
        return W
    return _memo(G, ("frattini", p), build)


def tame_quotient(G: Group, p: int) -> tuple[Group, Homomorphism]:
    return quotient(G, p_core(G, p))


@dataclass
class StructuralDecomposition:
    group: Group
    p: int
    V: Subgroup
    W: Subgroup
    T: Group
    projection: Homomorphism


def decompose_structure(G: Group, p: int) -> StructuralDecomposition:
    V = p_core(G, p)
    W = frattini_of_pcore(G, p)
    T, proj = tame_quotient(G, p)
    return StructuralDecomposition(G, p, V, W, T, proj)


def abelian_type(G: Group) -> dict[int, list[int]]:
    """Primary decomposition {l: [n_1 <= n_2 <= ...]} of an abelian group."""
    if not G.is_abelian:
        raise PreconditionError("abelian_type needs an abelian group")
    ords = G.element_orders
    out = {}
    for ell, v in sorted(sympy.factorint(G.order).items()):
        # log_ell |G[ell^k]| = sum_i min(k, n_i)
        logs = [0]
        for k in range(1, v + 1):
            cnt = int(np.count_nonzero((ell ** k) % ords == 0))
            logs.append(round(np.log(cnt) / np.log(ell)))
        ge = [logs[k] - logs[k - 1] for k in range(1, v + 1)]  # #{i : n_i >= k}
        m = ge[0]
        exps = sorted(sum(1 for k in range(v) if ge[k] > i) for i in range(m))
        out[ell] = exps
    return out


def invariant_factors(primary: dict[int, list[int]]) -> list[int]:
    """Invariant factors d_1 | d_2 | ... from a primary decomposition."""
    width = max((len(v) for v in primary.values()), default=0)
    factors = [1] * width
    for ell, exps in primary.items():
        for i, e in enumerate(reversed(exps)):
            factors[width - 1 - i] *= ell ** e
    return factors
