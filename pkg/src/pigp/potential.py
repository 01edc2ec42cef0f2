"""Potential p-realizability: tame structures and the screening algorithms."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .analysis import derived_subgroup, p_core, p_part, tame_quotient
from .construct import are_isomorphic, fingerprint_key, metacyclic_group
from .errors import CapacityError, PreconditionError
from .group import Group, Subgroup, generates, normal_subgroups, quotient, subgroup_generated

TAME_STRUCTURE_BOUND = 200


@dataclass
class TameStructure:
    """A filtration G >= G0 >= G1 with generators sigma of G/G0 and tau of G0/G1."""

    group: Group
    G0: Subgroup
    G1: Subgroup
    sigma: int
    tau: int

    def violations(self, p: int) -> list[str]:
        """Names of the clauses of the definition that fail (empty when valid)."""
        G, G0, G1 = self.group, self.G0, self.G1
        bad = []
        if not (G0.is_normal() and G1.is_normal() and G1.issubset(G0)):
            bad.append("normal")
            return bad
        Q0, pr0 = quotient(G, G0)
        if Q0.element_order(pr0(self.sigma)) != Q0.order:
            bad.append("G/G0 cyclic on sigma")
        if not G0.mask[self.tau]:
            bad.append("tau in G0")
        else:
            k = G0.order // G1.order
            sub = subgroup_generated(G, list(G1.generators()) + [self.tau])
            if sub.order != G0.order or k % p == 0:
                bad.append("G0/G1 cyclic prime to p on tau")
        if G.conj(self.tau, self.sigma) != G.pow(self.tau, p):
            bad.append("tame relation")
        if p_part(G1.order, p)[1] != G1.order:
            bad.append("G1 p-group")
        return bad

    def is_valid(self, p: int) -> bool:
        return not self.violations(p)

    def enlarged(self, p: int) -> "TameStructure":
        """The structure G >= G0 V >= V with the same generators."""
        G = self.group
        V = p_core(G, p)
        G0V = subgroup_generated(G, list(self.G0.generators()) + list(V.generators()))
        return TameStructure(G, G0V, V, self.sigma, self.tau)

    def describe(self) -> dict:
        return {"G0": self.G0.order, "G1": self.G1.order, "sigma": self.sigma, "tau": self.tau}


def tame_pairs_mask(G: Group, p: int) -> np.ndarray:
    """Boolean ``(n, n)`` array, entry ``[s, t]`` true iff ``t^s == t^p``."""
    t, inv = G.table, G.inv
    ar = np.arange(G.order)
    tp = ar.copy()
    for _ in range(p - 1):
        tp = t[tp, ar]
    conj = t[inv[:, None], t[ar[None, :], ar[:, None]]]  # conj[s, x] = x^s
    return conj == tp[None, :]


def _conj_exponent(G: Group, n0: int, g: int, e: int) -> int:
    """The a with n0^g = n0^a, for n0 of order e."""
    target = G.conj(n0, g)
    x = 0
    for a in range(e):
        if x == target:
            return a
        x = G.mul(x, n0)
    raise PreconditionError("conjugate of a generator of a normal cyclic subgroup left the subgroup")


def _discrete_log_exp(a: int, p: int, e: int):
    """Least b >= 0 with a^b = p (mod e), or None."""
    target = p % e
    x = 1 % e
    for b in range(e + 1):
        if x == target:
            return b
        x = (x * a) % e
    return None


def algorithm3_on_tame_quotient(T: Group, p: int) -> bool:
    """The cyclic-derived-subgroup screen applied to the tame quotient T."""
    if T.is_cyclic():
        return True
    D = derived_subgroup(T)
    if not D.is_cyclic():
        return False
    for N in normal_subgroups(T, D):
        if not N.is_cyclic():
            continue
        Q, proj = quotient(T, N)
        if not Q.is_cyclic():
            continue
        e, f = N.order, Q.order
        n0 = int(N.elements[np.argmax(T.element_orders[N.elements])])
        qorders = Q.element_orders
        for g in range(T.order):
            if qorders[proj.images[g]] != f:
                continue
            a = _conj_exponent(T, n0, g, e)
            b = _discrete_log_exp(a, p, e)
            if b is None:
                continue
            m = 1
            x = a % e
            while x != 1 % e:
                x = (x * a) % e
                m += 1
            if gcd(gcd(m, b), f) == 1:
                return True
    return False


def _lift_witness(G: Group, p: int, T, proj, sbar: int, tbar: int):
    """Lift a tame pair of T = G/V to (sigma, tau) in G with the tame relation."""
    V = p_core(G, p)
    sec = T.section
    ve = V.elements
    fib_t = G.table[sec[tbar], ve]
    o = T.element_order(tbar)
    tau = None
    for x in fib_t.tolist():
        if G.element_order(x) == o:
            tau = x
            break
    if tau is None:  # pragma: no cover - Schur-Zassenhaus guarantees a lift
        return None
    tp = G.pow(tau, p)
    for s in G.table[sec[sbar], ve].tolist():
        if G.conj(tau, s) == tp:
            return s, tau
    return None  # pragma: no cover


def find_tame_pair(T: Group, p: int):
    """Some (sigma, tau) in T with tau^sigma = tau^p generating T, or None."""
    M = tame_pairs_mask(T, p)
    ss, ts = np.nonzero(M)
    order = np.argsort(-(T.element_orders[ss].astype(np.int64) * T.order + T.element_orders[ts]), kind="stable")
    for i in order.tolist():
        s, t = int(ss[i]), int(ts[i])
        if generates(T, [s, t]):
            return s, t
    return None


def is_potentially_realizable(G: Group, p: int, witness: bool = True):
    """Return ``(verdict, TameStructure or None)``.

    The screen runs on the tame quotient ``T = G/V``: accept if T is cyclic,
    otherwise run the cyclic-derived-subgroup test on T.  A witness is
    constructed (and validated) on acceptance when ``witness`` is true.
    """
    if p % 2 == 0:
        raise PreconditionError("p must be odd")
    key = ("potential", p)
    verdict = G._cache.get(key)
    T, proj = tame_quotient(G, p)
    if verdict is None:
        verdict = algorithm3_on_tame_quotient(T, p)
        G._cache[key] = verdict
    if not verdict or not witness:
        return verdict, None
    pair = find_tame_pair(T, p)
    if pair is None:
        raise AssertionError(f"screen accepted {G!r} at p={p} but T has no tame pair")
    s, t = _lift_witness(G, p, T, proj, *pair)
    V = p_core(G, p)
    G0 = subgroup_generated(G, list(V.generators()) + [t])
    ts = TameStructure(G, G0, V, s, t)
    bad = ts.violations(p)
    if bad:  # pragma: no cover - defensive
        raise AssertionError(f"witness fails {bad}")
    return True, ts


def normal_p_subgroups(G: Group, p: int) -> list[Subgroup]:
    return [N for N in normal_subgroups(G) if p_part(N.order, p)[1] == N.order]


def tame_structures(G: Group, p: int, bound: int = TAME_STRUCTURE_BOUND) -> list[TameStructure]:
    """One witness per valid filtration (G0, G1), by exhaustive search."""
    if G.order > bound:
        raise CapacityError(f"tame structure search above order {bound}")
    M = tame_pairs_mask(G, p)
    out = []
    normals = normal_subgroups(G)
    for G1 in normal_p_subgroups(G, p):
        for G0 in normals:
            if not G1.issubset(G0):
                continue
            k = G0.order // G1.order
            if k % p == 0:
                continue
            Q0, pr0 = quotient(G, G0)
            if not Q0.is_cyclic():
                continue
            Q1, pr1 = quotient(G, G1)
            img0 = np.unique(pr1.images[G0.elements])
            sub = Q1.table[np.ix_(img0, img0)]
            if not np.all(np.isin(sub, img0)):  # pragma: no cover - G0/G1 is a subgroup
                continue
            # tau: elements of G0 whose image has order k in G0/G1 (cyclic iff one exists)
            taus = [int(x) for x in G0.elements if Q1.element_order(pr1.images[x]) == k]
            sigmas = [int(x) for x in range(G.order) if Q0.element_order(pr0.images[x]) == Q0.order]
            if not taus or not sigmas:
                continue
            found = None
            sub_M = M[np.ix_(sigmas, taus)]
            hits = np.argwhere(sub_M)
            if hits.size:
                i, j = hits[0]
                found = (sigmas[int(i)], taus[int(j)])
            if found:
                out.append(TameStructure(G, G0, G1, *found))
    return out


def tame_potential_groups(n: int, p: int):
    """Metacyclic groups <x, y | x^k = y^l, y^m = 1, y^x = y^p> of order n, up to isomorphism."""
    from .catalog import CatalogEntry

    found: list = []
    for k in range(1, n + 1):
        if n % k:
            continue
        m = n // k
        if (pow(p, k, m) - 1) % m:
            continue
        step = m // gcd(m, p - 1)
        for ell in range(0, m, step):
            G = metacyclic_group(k, m, ell, p)
            if G is None:  # pragma: no cover - loop bounds guarantee consistency
                continue
            if any(are_isomorphic(G, H.group) for H in found):
                continue
            found.append(CatalogEntry(f"metacyclic({k},{m},{ell},{p})", f"metacyclic({k},{m},{ell},{p})", G))
    found.sort(key=lambda e: (fingerprint_key(e.group), e.name))
    return found


def semidirect_conjecture_holds(G: Group, p: int):
    """Whether V has a complement in G; returns ``(bool, complement or None)``.

    Searches subgroups generated by lifts of a generating tame pair of T with
    the same element orders as in T.
    """
    V = p_core(G, p)
    T, proj = tame_quotient(G, p)
    if T.order == 1:
        return True, G.trivial
    if V.order == 1:
        return True, G.whole
    pair = find_tame_pair(T, p)
    if pair is None:
        raise PreconditionError("G is not potentially p-realizable")
    sbar, tbar = pair
    os_, ot = T.element_order(sbar), T.element_order(tbar)
    ve = V.elements
    lifts_s = [x for x in G.table[T.section[sbar], ve].tolist() if G.element_order(x) == os_]
    lifts_t = [x for x in G.table[T.section[tbar], ve].tolist() if G.element_order(x) == ot]
    for t in lifts_t:
        for s in lifts_s:
            H = subgroup_generated(G, [s, t])
            if H.order == T.order and not V.mask[H.elements[1:]].any():
                return True, H
    return False, None
