"""Counting Aut(G)-orbits of generating quadruples (sigma, tau, x0, x1).

Three engines are provided: a closed form for abelian groups, a search over
tame pairs when the p-core is trivial, and the lifting method through a
minimal normal subgroup.  :func:`count` dispatches between them.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from . import kernels
from .analysis import abelian_type, derived_subgroup, frattini_of_pcore, p_core, tame_quotient
from .automorphisms import (
    AutGroup,
    automorphism_group,
    automorphism_group_order,
    abelian_automorphism_count,
    induced_coset_reps,
    pack,
    unpack,
)
from .construct import find_isomorphism, fingerprint, fingerprint_key
from .errors import CapacityError, PreconditionError, UsageError
from .group import (
    Elem,
    Group,
    Subgroup,
    generates,
    minimal_normal_subgroups,
    normal_subgroups,
    quotient,
    subgroup_generated,
)
from .potential import is_potentially_realizable, tame_pairs_mask
from .relations import RelationContext, make_context

METHODS = ("abelian", "tame", "lifting")
MAX_DEPTH = 64
# Above this many automorphisms, orbits are deduplicated by canonical minimum
# instead of storing every orbit element in a set.
ORBIT_SET_LIMIT = 20000
# Abelian groups with more automorphisms than this are lifted over all of
# Aut(G/N) so that Aut(G) is never enumerated when no quadruple survives.
LAZY_AUT_THRESHOLD = 200_000


# -- result types -------------------------------------------------------------

@dataclass(frozen=True)
class TamePair:
    sigma: Elem
    tau: Elem


@dataclass(frozen=True)
class WildQuadruple:
    sigma: Elem
    tau: Elem
    x0: Elem
    x1: Elem

    def indices(self) -> tuple[int, int, int, int]:
        return (self.sigma.index, self.tau.index, self.x0.index, self.x1.index)


@dataclass
class CountResult:
    group: str
    p: int
    order: int
    method: str
    representatives: list
    seed_h: int
    millis: int = 0
    fingerprint: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.representatives)

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "fingerprint": self.fingerprint,
            "p": self.p,
            "order": self.order,
            "method": self.method,
            "count": self.count,
            "representatives": [list(map(int, q)) for q in self.representatives],
            "seed_h": self.seed_h,
            "millis": self.millis,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _result(G: Group, p: int, method: str, reps, ctx_seed: int, t0: float, **details) -> CountResult:
    return CountResult(
        group=G.name or "",
        p=p,
        order=G.order,
        method=method,
        representatives=[tuple(int(v) for v in q) for q in reps],
        seed_h=ctx_seed,
        millis=int(round(1000 * (time.perf_counter() - t0))),
        fingerprint=fingerprint(G),
        details=details,
    )


def _check_p(p: int) -> None:
    if p < 3 or p % 2 == 0:
        raise PreconditionError("p must be an odd prime")


# -- validation ----------------------------------------------------------------

def quadruple_violations(G: Group, p: int, quad, h_seed: int | None = None,
                         ctx: RelationContext | None = None) -> list[str]:
    """Clauses of the quadruple definition that ``quad`` fails (empty if valid)."""
    s, t, x0, x1 = (int(v) for v in quad)
    V = p_core(G, p)
    bad = []
    if G.conj(t, s) != G.pow(t, p):
        bad.append("tame relation")
    if not (V.mask[x0] and V.mask[x1]):
        bad.append("x0, x1 in V")
    if not generates(G, [s, t, x0, x1]):
        bad.append("generation")
    if ctx is None:
        ctx = make_context(G.order, p, h_seed)
    h = kernels.prepared(G)
    if not kernels.backend.wild_holds(h, ctx.kernel_ctx(), s, t, x0, x1):
        bad.append("wild relation")
    return bad


# -- T_G -------------------------------------------------------------------------

def tame_pairs_array(G: Group, p: int) -> np.ndarray:
    """``(k, 2)`` array of all (sigma, tau) in T_G, sorted lexicographically."""
    _check_p(p)
    if G.order > 4096:
        raise CapacityError("pair enumeration above order 4096")
    T, proj = tame_quotient(G, p)
    MT = tame_pairs_mask(T, p)
    gen_T = np.zeros_like(MT)
    for s, t in zip(*np.nonzero(MT)):
        gen_T[s, t] = generates(T, [int(s), int(t)])
    M = tame_pairs_mask(G, p)
    im = proj.images
    M &= gen_T[np.ix_(im, im)]
    return np.argwhere(M).astype(np.int64)


def enumerate_TG(G: Group, p: int) -> list[TamePair]:
    return [TamePair(G.elem(int(s)), G.elem(int(t))) for s, t in tame_pairs_array(G, p)]


# -- abelian groups ----------------------------------------------------------------

def _smith_2x2(M):
    """Return (d1, d2, Q) with P M Q = diag(d1, d2), d1 | d2, for some unimodular P."""
    A = [list(map(int, M[0])), list(map(int, M[1]))]
    Q = [[1, 0], [0, 1]]

    def swap_cols():
        for R in (A, Q):
            for r in range(2):
                R[r][0], R[r][1] = R[r][1], R[r][0]

    while True:
        nz = [(abs(A[r][c]), r, c) for r in range(2) for c in range(2) if A[r][c]]
        if not nz:
            return 0, 0, Q
        _, r, c = min(nz)
        if r:
            A[0], A[1] = A[1], A[0]
        if c:
            swap_cols()
        piv = A[0][0]
        k = A[0][1] // piv
        for R in (A, Q):  # column 1 -= k * column 0
            for i in range(2):
                R[i][1] -= k * R[i][0]
        k = A[1][0] // piv
        A[1] = [A[1][j] - k * A[0][j] for j in range(2)]
        if A[0][1] or A[1][0]:
            continue
        if A[1][1] % piv:
            A[0] = [A[0][j] + A[1][j] for j in range(2)]
            continue
        return abs(piv), abs(A[1][1]), Q


def _lattices(ell: int, exps: list[int], tau_exp: int | None):
    """Sublattices K of Z^2 with Z^2/K of type ``exps`` (0, 1 or 2 exponents).

    ``tau_exp`` is ``v_ell(p-1)`` when the second coordinate is tau (K must
    contain ``ell**tau_exp * e2``), or ``None`` when it is unconstrained.
    Yields ``(d1, d2, Q)``: the quotient map is ``w -> w Q mod (d1, d2)``.
    """
    target = sorted([1] * (2 - len(exps)) + [ell ** e for e in exps])
    index = target[0] * target[1]
    x = 1
    while x <= index:
        if index % x == 0:
            z = index // x
            if tau_exp is None or (ell ** tau_exp) % z == 0:
                for y in range(z):
                    if gcd(gcd(x, y), z) != target[0]:
                        continue
                    d1, d2, Q = _smith_2x2([[x, y], [0, z]])
                    assert sorted([d1, d2]) == target and d1 * d2 == index
                    yield d1, d2, Q
        x *= ell


def paper_case(ell: int, exps: list[int], p: int) -> int:
    """The case number (1-9) of the published closed form for one prime."""
    m = len(exps)
    c = _vl(p - 1, ell)
    if m >= 3:
        return 1
    if m == 2:
        a, b = exps
        if a != b and ell == p:
            return 2
        if a != b and ell != p and b <= c:
            return 3
        if a == b and ell == p:
            return 4
        if ell != p and a <= c:
            return 5
        return 6
    (a,) = exps
    if ell == p:
        return 7
    if a <= c:
        return 8
    return 9


def paper_case_count(ell: int, exps: list[int], p: int) -> int:
    """The value of c_ell as printed in the published closed form."""
    case = paper_case(ell, exps, p)
    if case in (1, 6):
        return 0
    if case in (2, 3):
        return 2
    if case in (4, 5):
        return 1
    (a,) = exps
    if case == 7:
        return p ** (a - 1) * (p + 1)
    if case == 8:
        return ell ** (a - 1) * (ell + 1)
    return gcd(ell ** a, p - 1)


def _vl(n: int, ell: int) -> int:
    k = 0
    while n % ell == 0:
        n //= ell
        k += 1
    return k


def abelian_basis(G: Group) -> dict[int, list[tuple[int, int]]]:
    """Per prime, a basis of the Sylow subgroup as (element, exponent), ascending exponents."""
    if not G.is_abelian:
        raise PreconditionError("group is not abelian")
    prim = abelian_type(G)
    orders = G.element_orders
    out = {}
    for ell, exps in prim.items():
        chosen = []
        H = subgroup_generated(G, [])
        for e in sorted(exps, reverse=True):
            cands = np.nonzero(orders == ell ** e)[0]
            for x in cands.tolist():
                if H.mask[G.pow(x, ell ** (e - 1))]:
                    continue  # <x> meets H
                K = subgroup_generated(G, list(H.generators()) + [x])
                if K.order == H.order * ell ** e:
                    H = K
                    chosen.append((x, e))
                    break
            else:  # pragma: no cover - an element of maximal order splits off
                raise AssertionError("failed to build an abelian basis")
        out[ell] = sorted(chosen, key=lambda xe: (xe[1], xe[0]))
    return out


def count_abelian(G: Group, p: int, h_seed: int | None = None, validate: bool = True) -> CountResult:
    """Closed-form count for abelian G, one factor per prime.

    For each prime ell the orbit representatives correspond to sublattices
    K of Z^2 with Z^2/K isomorphic to the ell-part (the two coordinates being
    sigma and x1 at ell = p, and sigma and tau otherwise, where tau must have
    order dividing p - 1).
    """
    t0 = time.perf_counter()
    _check_p(p)
    if not G.is_abelian:
        raise PreconditionError("count_abelian needs an abelian group")
    ctx = make_context(G.order, p, h_seed)
    basis = abelian_basis(G)
    cases, per_prime = {}, []
    for ell in sorted(basis):
        exps = [e for _, e in basis[ell]]
        cases[ell] = paper_case(ell, exps, p)
        comps = []
        if len(exps) <= 2:
            els = [x for x, _ in basis[ell]]
            tau_exp = None if ell == p else _vl(p - 1, ell)
            for d1, d2, Q in _lattices(ell, exps, tau_exp):
                # generators of Z/d1 x Z/d2 in G: the basis elements of matching order
                gens = [0] * (2 - len(els)) + els
                img = []
                for r in range(2):
                    v = 0
                    for k in range(2):
                        v = G.mul(v, G.pow(gens[k], Q[r][k]))
                    img.append(v)
                if ell == p:
                    comps.append((img[0], 0, G.pow(img[1], p), img[1]))
                else:
                    comps.append((img[0], img[1], 0, 0))
        per_prime.append(comps)
    reps = [(0, 0, 0, 0)]
    for comps in per_prime:
        reps = [tuple(G.mul(a, b) for a, b in zip(r, c)) for r in reps for c in comps]
    if validate:
        for q in reps:
            bad = quadruple_violations(G, p, q, ctx=ctx)
            if bad:  # pragma: no cover - defensive
                raise AssertionError(f"abelian representative {q} fails {bad}")
    return _result(G, p, "abelian", reps, ctx.seed, t0, cases=cases)


# -- tame groups ---------------------------------------------------------------------

class _OrbitMarker:
    """Deduplicate quadruples up to the action of an automorphism list."""

    def __init__(self, A: AutGroup):
        self.maps = A.maps
        self.n = A.parent.order
        self.use_set = A.order <= ORBIT_SET_LIMIT
        self.marked: set[int] = set()

    def _codes(self, quad) -> np.ndarray:
        m, n = self.maps, self.n
        s, t, x0, x1 = quad
        return ((m[:, s].astype(np.int64) * n + m[:, t]) * n + m[:, x0]) * n + m[:, x1]

    def canonical(self, quad) -> int:
        return int(self._codes(quad).min())

    def mark(self, quad) -> int | None:
        """Mark the orbit of ``quad``; return its canonical code, or None if already marked."""
        if self.use_set:
            code = int(pack(np.asarray(quad), self.n))
            if code in self.marked:
                return None
            codes = self._codes(quad)
            self.marked.update(codes.tolist())
            return int(codes.min())
        c = self.canonical(quad)
        if c in self.marked:
            return None
        self.marked.add(c)
        return c


def _finish(codes: list[int], n: int) -> list[tuple]:
    return [tuple(int(v) for v in q) for q in unpack(sorted(codes), n)]


def count_tame(G: Group, p: int, h_seed: int | None = None, A: AutGroup | None = None) -> CountResult:
    """Orbit representatives when the p-core is trivial (x0 = x1 = 1)."""
    t0 = time.perf_counter()
    _check_p(p)
    if p_core(G, p).order != 1:
        raise PreconditionError("count_tame needs a trivial p-core")
    ctx = make_context(G.order, p, h_seed)
    D = derived_subgroup(G)
    codes: list[int] = []
    if D.is_cyclic():
        A = A or automorphism_group(G)
        marker = _OrbitMarker(A)
        t, ar = G.table, np.arange(G.order)
        for N in normal_subgroups(G, D):
            if not N.is_cyclic():
                continue
            Q, _ = quotient(G, N)
            if not Q.is_cyclic():
                continue
            ne = N.elements
            powp = ne.copy()
            for _ in range(p - 1):
                powp = t[powp, ne]
            conj = t[G.inv[:, None], t[ne[None, :], ar[:, None]]]  # conj[s, i] = ne[i]^s
            sigmas = np.nonzero((conj == powp[None, :]).all(axis=1))[0]
            for s in sigmas.tolist():
                for tau in ne.tolist():
                    if not generates(G, [s, tau]):
                        continue
                    c = marker.mark((s, tau, 0, 0))
                    if c is not None:
                        codes.append(c)
    reps = _finish(codes, G.order)
    return _result(G, p, "tame", reps, ctx.seed, t0)


# -- lifting -------------------------------------------------------------------------

def choose_minimal_normal(G: Group) -> Subgroup:
    """Smallest order first, then the lexicographically least element set."""
    mins = minimal_normal_subgroups(G)
    return min(mins, key=lambda N: (N.order, N.elements.tolist()))


class YCache:
    """Orbit representatives of quotients, keyed by fingerprint plus isomorphism."""

    def __init__(self):
        self._store: dict[tuple, list[tuple[Group, list]]] = {}
        self.hits = 0

    def get(self, Q: Group, p: int, h_seed):
        for H, reps in self._store.get((fingerprint_key(Q), p, h_seed), []):
            if H is Q:
                self.hits += 1
                return reps
            phi = find_isomorphism(H, Q)
            if phi is not None:
                self.hits += 1
                im = phi.images
                return [tuple(int(im[v]) for v in q) for q in reps]
        return None

    def put(self, Q: Group, p: int, h_seed, reps) -> None:
        self._store.setdefault((fingerprint_key(Q), p, h_seed), []).append((Q, list(reps)))


_DEFAULT_CACHE = YCache()


def count_lifting(G: Group, p: int, h_seed: int | None = None, N: Subgroup | None = None,
                  cache: YCache | None = None, dual: bool = False, limit: int | None = None,
                  literal_marking: bool = False, depth: int = 0, chain: tuple = ()) -> CountResult:
    """Lift orbit representatives of G/N through a minimal normal subgroup N.

    ``dual`` swaps the sources of the x0 and x1 lifts (the alternative reading
    of the published loop header); ``limit`` stops after that many
    representatives; ``literal_marking`` also marks the orbits of
    non-generating relation-satisfying quadruples (same result, slower).
    """
    t0 = time.perf_counter()
    _check_p(p)
    cache = _DEFAULT_CACHE if cache is None else cache
    chain = chain + (f"{G.name or 'G'}[{G.order}]",)
    if depth > MAX_DEPTH:
        raise CapacityError("lifting recursion too deep: " + " -> ".join(chain))
    ctx = make_context(G.order, p, h_seed)
    n = G.order
    if n == 1:
        return _result(G, p, "lifting", [(0, 0, 0, 0)], ctx.seed, t0, N=0, cokreps=1, YQ=1)
    if N is None:
        N = choose_minimal_normal(G)
    elif N.parent is not G or not N.is_normal() or N.order == 1:
        raise UsageError("N must be a nontrivial normal subgroup of G")
    Q, proj = quotient(G, N)
    YQ = _quotient_reps(Q, p, h_seed, cache, depth + 1, chain)
    if not YQ:
        return _result(G, p, "lifting", [], ctx.seed, t0, N=N.order, cokreps=None, YQ=0)
    AQ = automorphism_group(Q)
    A = None
    if G.is_abelian and abelian_automorphism_count(abelian_type(G)) > LAZY_AUT_THRESHOLD:
        # translate by all of Aut(Q); Aut(G) is only built if a quadruple survives
        cokreps = list(AQ.maps)
    else:
        A = automorphism_group(G)
        cokreps = induced_coset_reps(G, N, A, AQ)
    V = p_core(G, p)
    orders = G.element_orders
    sec = Q.section
    ne = N.elements
    tab = G.table
    h = kernels.prepared(G)
    kctx = ctx.kernel_ctx()
    marker = _OrbitMarker(A) if A is not None else None
    codes: list[int] = []
    done = False
    for y in YQ:
        for alpha in cokreps:
            s_bar, t_bar, x0_bar, x1_bar = (int(alpha[v]) for v in y)
            if dual:
                x0_bar, x1_bar = x1_bar, x0_bar
            f1 = tab[sec[x1_bar], ne]
            f0 = tab[sec[x0_bar], ne]
            ft = tab[sec[t_bar], ne]
            xs1 = f1[V.mask[f1]].tolist()
            xs0 = f0[V.mask[f0]].tolist()
            ts = ft[orders[ft] % p != 0].tolist()
            ss = tab[sec[s_bar], ne].tolist()
            if not (xs1 and xs0 and ts):
                continue
            for quad in kernels.backend.lift_search(h, kctx, xs1, xs0, ts, ss):
                gen = generates(G, list(quad))
                if not gen and not literal_marking:
                    continue  # generation is Aut(G)-invariant
                if marker is None:
                    A = automorphism_group(G)
                    marker = _OrbitMarker(A)
                c = marker.mark(quad)
                if c is not None and gen:
                    codes.append(c)
                    if limit is not None and len(codes) >= limit:
                        done = True
                        break
            if done:
                break
        if done:
            break
    reps = _finish(codes, n)
    return _result(G, p, "lifting", reps, ctx.seed, t0, N=N.order, cokreps=len(cokreps),
                   YQ=len(YQ), dual=dual, partial=done)


def _quotient_reps(Q: Group, p: int, h_seed, cache: YCache, depth: int, chain: tuple) -> list:
    hit = cache.get(Q, p, h_seed)
    if hit is not None:
        return hit
    res = count(Q, p, h_seed=h_seed, cache=cache, _depth=depth, _chain=chain)
    cache.put(Q, p, h_seed, res.representatives)
    return res.representatives


# -- oracle and dispatcher ----------------------------------------------------------

def count_bruteforce(G: Group, p: int, h_seed: int | None = None, bound: int = 60) -> CountResult:
    """Exhaustive search over all of G^2 x V^2 (test oracle for small groups)."""
    t0 = time.perf_counter()
    _check_p(p)
    if G.order > bound:
        raise CapacityError(f"brute force above order {bound}")
    ctx = make_context(G.order, p, h_seed)
    V = p_core(G, p)
    A = automorphism_group(G)
    marker = _OrbitMarker(A)
    orders = G.element_orders
    ve = V.elements.tolist()
    ts = [int(x) for x in np.nonzero(orders % p != 0)[0]]
    codes = []
    h = kernels.prepared(G)
    for quad in kernels.backend.lift_search(h, ctx.kernel_ctx(), ve, ve, ts, list(range(G.order))):
        if generates(G, list(quad)):
            c = marker.mark(quad)
            if c is not None:
                codes.append(c)
    return _result(G, p, "bruteforce", _finish(codes, G.order), ctx.seed, t0)


def count(G: Group, p: int, method: str = "auto", h_seed: int | None = None,
          cache: YCache | None = None, dual: bool = False, limit: int | None = None,
          _depth: int = 0, _chain: tuple = ()) -> CountResult:
    """Number of Aut(G)-orbits of generating quadruples, with representatives.

    ``method`` forces a branch ("abelian", "tame", "lifting"); the default
    picks abelian, then tame (trivial p-core), then lifting.  Groups that are
    not potentially p-realizable get count 0 without a search.
    """
    t0 = time.perf_counter()
    _check_p(p)
    if method not in ("auto",) + METHODS:
        raise UsageError(f"unknown method {method!r}")
    cache = _DEFAULT_CACHE if cache is None else cache
    if method == "auto":
        if G.is_abelian:
            method = "abelian"
        elif p_core(G, p).order == 1:
            method = "tame"
        else:
            method = "lifting"
        pot, _ = is_potentially_realizable(G, p, witness=False)
        if not pot:
            ctx = make_context(G.order, p, h_seed)
            return _result(G, p, method, [], ctx.seed, t0, screened=True)
    if method == "abelian":
        return count_abelian(G, p, h_seed)
    if method == "tame":
        return count_tame(G, p, h_seed)
    return count_lifting(G, p, h_seed, cache=cache, dual=dual, limit=limit, depth=_depth, chain=_chain)


def is_realizable(G: Group, p: int, h_seed: int | None = None, cache: YCache | None = None) -> bool:
    """Whether the count is positive (stops at the first representative when lifting)."""
    if G.is_abelian or p_core(G, p).order == 1:
        return count(G, p, h_seed=h_seed, cache=cache).count > 0
    pot, _ = is_potentially_realizable(G, p, witness=False)
    if not pot:
        return False
    return count_lifting(G, p, h_seed, cache=cache, limit=1).count > 0


def shafarevich_count(G: Group, p: int) -> Fraction:
    """(1/|Aut G|) (|G|/p^d)^2 prod_{i<d} (p^2 - p^i) for a p-group G with d generators."""
    _check_p(p)
    n = G.order
    k = n
    while k % p == 0:
        k //= p
    if k != 1:
        raise PreconditionError("shafarevich_count needs a p-group")
    W = frattini_of_pcore(G, p)
    d = _vl(n // W.order, p)
    num = (n // p ** d) ** 2
    for i in range(d):
        num *= p ** 2 - p ** i
    return Fraction(num, automorphism_group_order(G))
