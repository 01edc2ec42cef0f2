"""Concrete group constructions, fingerprints and isomorphism testing."""

from __future__ import annotations

from collections import Counter
from typing import Iterator, Sequence

import numpy as np
import sympy

from . import kernels
from .analysis import abelian_type, derived_series, derived_subgroup, invariant_factors
from .errors import CapacityError, PreconditionError
from .group import Group, Homomorphism, quotient, small_generating_set

ISO_BOUND = 2000


# -- builders -----------------------------------------------------------------

def group_from_permutations(perms: Sequence[Sequence[int]], name: str = "") -> Group:
    """Group generated by 0-based permutation image lists.

    Products compose left to right: ``(x*y)(i) = y(x(i))``.  Elements are
    numbered in breadth-first order from the identity.
    """
    perms = [tuple(int(v) for v in g) for g in perms]
    degree = len(perms[0]) if perms else 0
    for g in perms:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ValueError("generator is not a permutation of the common degree")
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    parent = [-1]
    via = [-1]
    rmul = [[] for _ in perms]
    i = 0
    while i < len(elems):
        e = elems[i]
        for k, g in enumerate(perms):
            c = tuple(g[v] for v in e)
            j = index.get(c)
            if j is None:
                j = len(elems)
                if j >= 4096:
                    raise CapacityError("permutation group larger than 4096")
                index[c] = j
                elems.append(c)
                parent.append(i)
                via.append(k)
            rmul[k].append(j)
        i += 1
    n = len(elems)
    R = np.asarray(rmul, dtype=np.int32).reshape(len(perms), n) if perms else np.zeros((0, 1), np.int32)
    table = np.zeros((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n)
    for j in range(1, n):
        table[:, j] = R[via[j]][table[:, parent[j]]]
    gens = [index[g] for g in perms]
    return Group(table, gens, name=name, perms=[list(g) for g in perms])


def cyclic_group(n: int) -> Group:
    ar = np.arange(n)
    return Group((ar[:, None] + ar[None, :]) % n, [1] if n > 1 else [], name=f"C{n}")


def abelian_group(invariant_factors: Sequence[int]) -> Group:
    """Direct product of cyclic groups; element index is mixed radix (first factor fastest)."""
    factors = [int(f) for f in invariant_factors]
    if any(f < 1 for f in factors):
        raise ValueError("factors must be positive")
    factors = [f for f in factors if f > 1]
    name = "x".join(f"C{f}" for f in factors) or "C1"
    if len(factors) <= 1:
        G = cyclic_group(factors[0] if factors else 1)
        G.name = name
    else:
        n = int(np.prod(factors))
        idx = np.arange(n)
        coords = []
        w = 1
        weights = []
        for f in factors:
            coords.append((idx // w) % f)
            weights.append(w)
            w *= f
        table = np.zeros((n, n), dtype=np.int64)
        for c, f, wt in zip(coords, factors, weights):
            table += ((c[:, None] + c[None, :]) % f) * wt
        G = Group(table, weights, name=name)
    G.factors = tuple(factors)
    G.primary_decomposition = _primary(factors)
    return G


def _primary(factors):
    out: dict[int, list[int]] = {}
    for f in factors:
        for ell, e in sympy.factorint(f).items():
            out.setdefault(ell, []).append(e)
    return {ell: sorted(v) for ell, v in sorted(out.items())}


def elementary_abelian(p: int, k: int) -> Group:
    G = abelian_group([p] * k)
    G.name = f"F{p}^{k}"
    return G


def _action_tables(V: Group, T: Group, action) -> np.ndarray:
    """Full table F[t] of automorphism image lists from generator images."""
    if isinstance(action, dict):
        gen_imgs = [np.asarray(action[g], dtype=np.int64) for g in T.gens]
    else:
        gen_imgs = [np.asarray(a, dtype=np.int64) for a in action]
    if len(gen_imgs) != len(T.gens):
        raise PreconditionError("one automorphism per generator of T is required")
    for a in gen_imgs:
        if a.shape != (V.order,) or not Homomorphism(V, V, a).is_homomorphism() or np.unique(a).size != V.order:
            raise PreconditionError("action image is not an automorphism of V")
    F = np.full((T.order, V.order), -1, dtype=np.int64)
    F[0] = np.arange(V.order)
    queue = [0]
    for t in queue:
        for g, a in zip(T.gens, gen_imgs):
            u = int(T.table[t, g])
            f = F[t][a]  # phi_{t g} = phi_t o phi_g
            if F[u, 0] < 0:
                F[u] = f
                queue.append(u)
            elif not np.array_equal(F[u], f):
                raise PreconditionError("action is not a homomorphism T -> Aut(V)")
    return F


def semidirect_product(V: Group, T: Group, action=None, name: str = "") -> Group:
    """V x| T with T acting on the left: ``(v,t)(v',t') = (v * t(v'), t t')``.

    ``action`` lists, for each generator of ``T`` (in ``T.gens`` order), the
    image list of the automorphism of ``V``; ``None`` means the trivial action.
    Element ``(v, t)`` has index ``t * |V| + v``.
    """
    if action is None:
        F = np.tile(np.arange(V.order), (T.order, 1))
    else:
        F = _action_tables(V, T, action)
    nv, nt = V.order, T.order
    n = nv * nt
    idx = np.arange(n)
    v, t = idx % nv, idx // nv
    vt = V.table[v[:, None], F[t[:, None], v[None, :]]]
    tt = T.table[t[:, None], t[None, :]]
    table = tt * nv + vt
    gens = list(V.gens) + [g * nv for g in T.gens]
    G = Group(table, gens, name=name or f"({V.name or 'V'})x|({T.name or 'T'})")
    G.action = F
    return G


def direct_product(A: Group, B: Group, name: str = "") -> Group:
    return semidirect_product(A, B, None, name=name or f"{A.name or 'A'}x{B.name or 'B'}")


def metacyclic_group(k: int, m: int, l: int, r: int, name: str = "") -> Group | None:
    """<x, y | x^k = y^l, y^m = 1, y^x = y^r> on pairs (i, j) = x^i y^j.

    Returns ``None`` unless ``m | r^k - 1`` and ``l (r - 1) = 0 (mod m)``.
    Index of ``(i, j)`` is ``i * m + j``.
    """
    if k < 1 or m < 1 or not 0 <= l < m:
        return None
    if (pow(r, k, m) - 1) % m or (l * (r - 1)) % m:
        return None
    n = k * m
    idx = np.arange(n)
    i, j = idx // m, idx % m
    rp = np.array([pow(r, e, m) for e in range(k)], dtype=np.int64)
    s = i[:, None] + i[None, :]
    carry = (s >= k).astype(np.int64)
    jj = (j[:, None] * rp[i[None, :]] + j[None, :] + l * carry) % m
    table = (s % k) * m + jj
    gens = [g for g in (m if k > 1 else 0, 1 if m > 1 else 0) if g]
    return Group(table, gens, name=name or f"M({k},{m},{l},{r})")


def quaternion8() -> Group:
    G = metacyclic_group(2, 4, 2, 3, name="Q8")
    return G


def dicyclic_group(m: int) -> Group:
    """Dicyclic group of order 4m."""
    return metacyclic_group(2, 2 * m, m, 2 * m - 1, name=f"Dic{m}")


def dihedral_group(m: int) -> Group:
    """Dihedral group of order 2m."""
    if m <= 2:
        return abelian_group([2] * m if m == 2 else [2])
    return metacyclic_group(2, m, 0, m - 1, name=f"D{2 * m}")


def heisenberg_group(p: int) -> Group:
    """Upper unitriangular 3x3 matrices over F_p: (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')."""
    n = p ** 3
    idx = np.arange(n)
    a, b, c = idx % p, (idx // p) % p, idx // (p * p)
    A = (a[:, None] + a[None, :]) % p
    B = (b[:, None] + b[None, :]) % p
    C = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    return Group(A + p * B + p * p * C, [1, p], name=f"Heis({p})")


def inversion_automorphism(A: Group) -> np.ndarray:
    if not A.is_abelian:
        raise PreconditionError("inversion is an automorphism only of abelian groups")
    return A.inv.copy()


def generalized_dihedral(A: Group, name: str = "") -> Group:
    """A x| C2 with the involution acting by inversion."""
    C2 = cyclic_group(2)
    return semidirect_product(A, C2, [inversion_automorphism(A)],
                              name=name or f"Dih({A.name or 'A'})")


def symmetric_group(d: int) -> Group:
    if d < 2:
        return cyclic_group(1)
    cyc = list(range(1, d)) + [0]
    tr = [1, 0] + list(range(2, d))
    return group_from_permutations([tr, cyc] if d > 2 else [tr], name=f"S{d}")


def alternating_group(d: int) -> Group:
    if d < 3:
        return cyclic_group(1)
    gens = []
    for i in range(2, d):
        g = list(range(d))
        g[0], g[1], g[i] = 1, i, 0
        gens.append(g)
    return group_from_permutations(gens, name=f"A{d}")


# -- fingerprints and isomorphism ---------------------------------------------

def fingerprint(G: Group) -> dict:
    """Isomorphism invariants; equal fingerprints are necessary for isomorphism."""
    hit = G._cache.get("fingerprint")
    if hit is not None:
        return hit
    D = derived_subgroup(G)
    Ab, _ = quotient(G, D)
    fp = {
        "order": G.order,
        "element_orders": sorted(Counter(G.element_orders.tolist()).items()),
        "abelian_invariants": invariant_factors(abelian_type(Ab)),
        "derived_series": derived_series(G),
        "class_sizes": sorted(Counter(len(c) for c in G.conjugacy_classes).items()),
    }
    G._cache["fingerprint"] = fp
    return fp


def fingerprint_key(G: Group) -> str:
    fp = fingerprint(G)
    return repr(tuple(fp[k] for k in sorted(fp)))


def _profile(G: Group) -> np.ndarray:
    return G.element_orders.astype(np.int64) * (G.order + 1) + G.class_sizes


def iter_isomorphisms(G: Group, H: Group, gens: Sequence[int] | None = None,
                      budget: int | None = None) -> Iterator[np.ndarray]:
    """Yield every isomorphism G -> H as an image array.

    Backtracks over images of a generating set of G, restricted to elements of
    H with the same order and class size, extending the partial map
    multiplicatively at each level.
    """
    if G.order != H.order:
        return
    if gens is None:
        gens = _search_gens(G)
    gens = list(gens)
    if not gens:
        yield np.zeros(1, dtype=np.int32)
        return
    pg, ph = _profile(G), _profile(H)
    cands = [np.nonzero(ph == pg[g])[0].tolist() for g in gens]
    hg, hh = kernels.prepared(G), kernels.prepared(H)
    ext = kernels.backend.extend_map
    nodes = 0
    chosen: list[int] = []
    k = len(gens)

    def rec(level):
        nonlocal nodes
        for c in cands[level]:
            nodes += 1
            if budget is not None and nodes > budget:
                raise CapacityError(f"automorphism/isomorphism search for {G.name or G!r} exceeded {budget} nodes")
            chosen.append(c)
            img = ext(hg, hh, gens[:level + 1], chosen, True)
            if img is not None:
                if level + 1 == k:
                    yield np.asarray(img, dtype=np.int32)
                else:
                    yield from rec(level + 1)
            chosen.pop()

    yield from rec(0)


def _search_gens(G: Group) -> tuple[int, ...]:
    hit = G._cache.get("search_gens")
    if hit is None:
        hit = small_generating_set(G)
        G._cache["search_gens"] = hit
    return hit


def find_isomorphism(G: Group, H: Group) -> Homomorphism | None:
    if G.order > ISO_BOUND and H.order > ISO_BOUND:
        raise CapacityError(f"isomorphism test above order {ISO_BOUND}")
    if G is H:
        return Homomorphism(G, H, np.arange(G.order))
    if fingerprint(G) != fingerprint(H):
        return None
    for img in iter_isomorphisms(G, H):
        return Homomorphism(G, H, img)
    return None


def are_isomorphic(G: Group, H: Group) -> bool:
    return find_isomorphism(G, H) is not None
