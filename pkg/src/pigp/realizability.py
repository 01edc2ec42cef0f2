"""V/W as an F_p[T]-module, its indecomposable decomposition, and the
multiplicity criteria for (un)realizability.

Vectors are rows; a group element g acts on the right by ``v -> v M_g``,
matching conjugation ``x -> g^-1 x g``, so that ``M_{gh} = M_g M_h``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
import sympy

from . import kernels
from .analysis import frattini_of_pcore, p_core, tame_quotient
from .counting import count, is_realizable, tame_pairs_array
from .errors import CapacityError, PreconditionError
from .group import Group, minimal_normal_subgroups, quotient, subgroup_generated
from .potential import is_potentially_realizable
from .relations import make_context

MAX_DIM = 8
EXHAUSTIVE_LIMIT = 4096  # enumerate whole Hom/End spaces up to this size
RANDOM_TRIALS = 256
SPIN_LIMIT = 200_000  # projective points examined by the irreducibility test


# -- linear algebra over F_p -----------------------------------------------------

def rref(M, p: int):
    """Reduced row echelon form mod p; returns (R, pivot columns)."""
    R = np.array(M, dtype=np.int64) % p
    rows, cols = R.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        others = np.nonzero(R[:, c])[0]
        for j in others:
            if j != r:
                R[j] = (R[j] - R[j, c] * R[r]) % p
        piv.append(c)
        r += 1
    return R, piv


def rank(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Basis (rows) of {x : M x = 0} mod p."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(M, p)
    free = [c for c in range(cols) if c not in piv]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, c in enumerate(piv):
            out[k, c] = (-R[i, f]) % p
    return out


def left_nullspace(M, p: int) -> np.ndarray:
    """Basis (rows) of {v : v M = 0} mod p."""
    return nullspace(np.asarray(M).T, p)


def row_basis(M, p: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return M.reshape(0, M.shape[1] if M.ndim == 2 else 0)
    R, piv = rref(M, p)
    return R[: len(piv)]


def inverse(M, p: int) -> np.ndarray:
    k = M.shape[0]
    R, piv = rref(np.hstack([M % p, np.eye(k, dtype=np.int64)]), p)
    if piv[:k] != list(range(k)):
        raise ValueError("matrix is singular mod p")
    return R[:, k:]


def solve_left(B, C, p: int) -> np.ndarray:
    """The R with R B = C, for B of full row rank (raises if none exists)."""
    B = np.asarray(B, dtype=np.int64) % p
    C = np.asarray(C, dtype=np.int64) % p
    _, piv = rref(B, p)
    R = (C[:, piv] @ inverse(B[:, piv], p)) % p
    if not np.array_equal((R @ B) % p, C):
        raise ValueError("row space of C is not contained in that of B")
    return R


def _matpow(X, e: int, p: int) -> np.ndarray:
    out = np.eye(X.shape[0], dtype=np.int64)
    base = X % p
    while e:
        if e & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        e >>= 1
    return out


def _poly_at(coeffs, X, p: int) -> np.ndarray:
    """Horner evaluation of a polynomial (highest degree first) at X."""
    out = np.zeros_like(X)
    eye = np.eye(X.shape[0], dtype=np.int64)
    for c in coeffs:
        out = (out @ X + int(c) * eye) % p
    return out


def spin(v, mats, p: int) -> np.ndarray:
    """Row basis of the smallest invariant subspace containing the rows of v."""
    B = row_basis(np.atleast_2d(v), p)
    while True:
        imgs = [B] + [(B @ M) % p for M in mats]
        B2 = row_basis(np.vstack(imgs), p)
        if B2.shape[0] == B.shape[0]:
            return B2
        B = B2


# -- modules -------------------------------------------------------------------------

@dataclass
class FpTModule:
    """V/W with the conjugation action of T = G/V."""

    p: int
    dim: int
    basis: list  # elements of V whose images form a basis of V/W
    gens: list  # action matrices of T.gens
    mats: np.ndarray | None = None  # (|T|, d, d) matrices of all of T, when known
    coords: np.ndarray | None = None  # (|G|, d) coordinates of V elements (-1 outside V)
    T: Group | None = None

    def check(self) -> None:
        """Invertibility and multiplicativity of the action matrices."""
        for M in self.gens:
            if rank(M, self.p) != self.dim:
                raise AssertionError("action matrix is singular")
        if self.mats is not None and self.T is not None and self.dim:
            prod = np.einsum("aij,bjk->abik", self.mats, self.mats) % self.p
            if not np.array_equal(prod, self.mats[self.T.table]):
                raise AssertionError("action is not multiplicative")


def vw_module(G: Group, p: int) -> FpTModule:
    V = p_core(G, p)
    W = frattini_of_pcore(G, p)
    T, proj = tame_quotient(G, p)
    H = W
    basis = []
    for v in V.elements.tolist():
        if not H.mask[v]:
            basis.append(v)
            H = subgroup_generated(G, list(H.generators()) + [v])
    d = len(basis)
    coords = np.full((G.order, d), -1, dtype=np.int64)
    we = W.elements
    for c in itertools.product(range(p), repeat=d):
        e = 0
        for b, k in zip(basis, c):
            e = G.mul(e, G.pow(b, k))
        coords[G.table[e, we]] = c
    mats = np.zeros((T.order, d, d), dtype=np.int64)
    for tb in range(T.order):
        g = int(T.section[tb])
        for i, b in enumerate(basis):
            mats[tb, i] = coords[G.conj(b, g)]
    M = FpTModule(p, d, basis, [mats[g] for g in T.gens], mats, coords, T)
    M.check()
    return M


def _restrict(mats, B, p: int) -> list:
    return [solve_left(B, (B @ M) % p, p) for M in mats]


def _commutant_system(A_list, B_list, k1: int, k2: int) -> np.ndarray:
    """Rows of the linear system A X = X B (X is k1 x k2, row-major vectorised)."""
    blocks = [np.kron(A, np.eye(k2, dtype=np.int64)) - np.kron(np.eye(k1, dtype=np.int64), B.T)
              for A, B in zip(A_list, B_list)]
    if not blocks:
        return np.zeros((0, k1 * k2), dtype=np.int64)
    return np.vstack(blocks)


def hom_basis(A_list, B_list, k1: int, k2: int, p: int) -> list:
    """Basis of the module maps (k1 x k2 matrices X with A_g X = X B_g)."""
    ns = nullspace(_commutant_system(A_list, B_list, k1, k2) % p, p)
    return [v.reshape(k1, k2) for v in ns]


def _elements_of_span(basis, p: int, seed: int):
    """All elements of the span when small, else the basis and seeded random combinations."""
    k = len(basis)
    if k == 0:
        return
    if p ** k <= EXHAUSTIVE_LIMIT:
        for c in itertools.product(range(p), repeat=k):
            if any(c):
                yield sum(ci * b for ci, b in zip(c, basis)) % p
        return
    yield from basis
    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_TRIALS):
        c = rng.integers(0, p, size=k)
        yield sum(int(ci) * b for ci, b in zip(c, basis)) % p


def _split_by(X, p: int):
    """Invariant splitting (ker, im) of f(X)^k for an irreducible factor f, or None."""
    k = X.shape[0]
    cp = sympy.Matrix(X.tolist()).charpoly()
    facs = sympy.Poly(cp.as_expr(), cp.gens[0], modulus=p).factor_list()[1]
    if len(facs) < 2:
        return None
    for f, _ in facs:
        coeffs = [int(c) % p for c in f.all_coeffs()]
        Y = _matpow(_poly_at(coeffs, X, p), k, p)
        K = left_nullspace(Y, p)
        if 0 < K.shape[0] < k:
            return K, row_basis(Y, p)
    return None  # pragma: no cover - two coprime factors always split


def _decompose_local(mats, k: int, p: int, seed: int) -> list:
    """Bases (in local coordinates) of indecomposable summands."""
    if k <= 1:
        return [np.eye(k, dtype=np.int64)] if k else []
    ends = hom_basis(mats, mats, k, k, p)
    for X in _elements_of_span(ends, p, seed):
        parts = _split_by(X, p)
        if parts is None:
            continue
        out = []
        for B in parts:
            sub = _decompose_local(_restrict(mats, B, p), B.shape[0], p, seed + 1)
            out.extend([(S @ B) % p for S in sub])
        return out
    return [np.eye(k, dtype=np.int64)]


def _isomorphic(A_list, B_list, k: int, p: int, seed: int) -> bool:
    hb = hom_basis(A_list, B_list, k, k, p)
    for X in _elements_of_span(hb, p, seed):
        if rank(X, p) == k:
            return True
    return False


def is_irreducible(mats, k: int, p: int) -> bool:
    """No proper nonzero invariant subspace (every nonzero vector spins to the whole space)."""
    if k <= 1:
        return True
    npts = (p ** k - 1) // (p - 1)
    if npts > SPIN_LIMIT:
        raise CapacityError(f"irreducibility test on {npts} projective points")
    for v in itertools.product(range(p), repeat=k):
        nz = [x for x in v if x]
        if not nz or nz[0] != 1:  # one representative per line
            continue
        if spin(np.array([v]), mats, p).shape[0] < k:
            return False
    return True


@dataclass
class Decomposition:
    p: int
    dim: int
    summands: list  # list of (basis rows in V/W coordinates, class index)
    classes: list  # list of dict(dim, multiplicity, irreducible)

    @property
    def n(self) -> int:
        return max((c["multiplicity"] for c in self.classes), default=0)

    def shape(self) -> str:
        parts = []
        for c in sorted(self.classes, key=lambda c: (-c["multiplicity"], -c["dim"])):
            parts.append(f"{c['dim']}^{c['multiplicity']}" if c["multiplicity"] > 1 else f"{c['dim']}")
        return " ⊕ ".join(parts) if parts else "0"

    def signature(self) -> list[tuple[int, int]]:
        return sorted((c["dim"], c["multiplicity"]) for c in self.classes)

    @property
    def multiplicity_free(self) -> bool:
        return all(c["multiplicity"] == 1 for c in self.classes)


def decompose(M: FpTModule | list, p: int | None = None, dim: int | None = None, seed: int = 0) -> Decomposition:
    """Direct-sum decomposition into indecomposables, grouped into isomorphism classes.

    Accepts an :class:`FpTModule` or a list of action matrices (with ``p`` and
    ``dim``).  Summands are split off with Fitting decompositions of module
    endomorphisms; isomorphism of summands is decided by searching for an
    invertible module map.
    """
    if isinstance(M, FpTModule):
        mats, p, k = [np.asarray(g, dtype=np.int64) for g in M.gens], M.p, M.dim
    else:
        mats = [np.asarray(g, dtype=np.int64) % p for g in M]
        k = dim if dim is not None else (mats[0].shape[0] if mats else 0)
    if k > MAX_DIM:
        raise CapacityError(f"module dimension {k} above {MAX_DIM}")
    bases = _decompose_local(mats, k, p, seed)
    restricted = [_restrict(mats, B, p) for B in bases]
    classes: list[dict] = []
    reps: list[tuple[int, list]] = []
    summands = []
    for B, R in zip(bases, restricted):
        kk = B.shape[0]
        idx = None
        for ci, (rk, RR) in enumerate(reps):
            if rk == kk and _isomorphic(RR, R, kk, p, seed):
                idx = ci
                break
        if idx is None:
            idx = len(reps)
            reps.append((kk, R))
            classes.append({"dim": kk, "multiplicity": 0, "irreducible": None})
        classes[idx]["multiplicity"] += 1
        summands.append((B, idx))
    for (kk, R), c in zip(reps, classes):
        c["irreducible"] = is_irreducible(R, kk, p)
    assert sum(c["dim"] * c["multiplicity"] for c in classes) == k
    return Decomposition(p, k, summands, classes)


# -- predicates and theorems ---------------------------------------------------------

@dataclass
class Predicates:
    ss: bool
    td: bool
    xc: bool
    witnesses: dict = field(default_factory=dict)

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (self.ss, self.td, self.xc)


def predicates_ss_td_xc(G: Group, p: int, h_seed: int | None = None) -> Predicates:
    """Strongly split, tame-decoupled and x0-constrained, quantified over all of T_G."""
    pairs = tame_pairs_array(G, p)
    T, proj = tame_quotient(G, p)
    V = p_core(G, p)
    W = frattini_of_pcore(G, p)
    wit: dict = {}
    go = G.element_orders[pairs[:, 0]] if len(pairs) else np.zeros(0, dtype=np.int64)
    to = T.element_orders[proj.images[pairs[:, 0]]] if len(pairs) else go
    bad = np.nonzero(go != to)[0]
    ss = bad.size == 0
    if not ss:
        wit["ss"] = tuple(int(v) for v in pairs[bad[0]])
    M = vw_module(G, p)
    td = True
    if M.dim:
        eye = np.eye(M.dim, dtype=np.int64)
        for tbar in np.unique(proj.images[pairs[:, 1]]).tolist() if len(pairs) else []:
            if not np.array_equal(M.mats[tbar], eye):
                td = False
                row = pairs[np.nonzero(proj.images[pairs[:, 1]] == tbar)[0][0]]
                wit["td"] = tuple(int(v) for v in row)
                break
    xc = True
    if V.order > W.order and len(pairs):
        ctx = make_context(G.order, p, h_seed)
        h = kernels.prepared(G)
        hit = kernels.backend.xc_violation(h, ctx.kernel_ctx(), [tuple(map(int, r)) for r in pairs],
                                           V.elements.tolist(), W.mask.astype(np.uint8))
        if hit is not None:
            xc = False
            wit["xc"] = tuple(int(v) for v in hit)
    return Predicates(ss, td, xc, wit)


def _require_potential(G: Group, p: int) -> None:
    if not is_potentially_realizable(G, p, witness=False)[0]:
        raise PreconditionError("G is not potentially p-realizable")


def thm_multiplicity_unrealizable(G: Group, p: int, pred: Predicates | None = None,
                                  dec: Decomposition | None = None) -> bool:
    """True when the largest multiplicity n exceeds 1 + n_ss + n_xc (certifies count 0)."""
    _require_potential(G, p)
    pred = pred or predicates_ss_td_xc(G, p)
    dec = dec or decompose(vw_module(G, p))
    return dec.n > 1 + (not pred.ss) + (not pred.xc)


def thm_converse_realizable(G: Group, p: int, dec: Decomposition | None = None) -> bool:
    """True when W = 1 and V is a multiplicity-free sum of irreducibles (certifies count >= 1)."""
    _require_potential(G, p)
    if frattini_of_pcore(G, p).order != 1:
        return False
    dec = dec or decompose(vw_module(G, p))
    return dec.multiplicity_free and all(c["irreducible"] for c in dec.classes)


# -- reports and scanning ------------------------------------------------------------

@dataclass
class RealizabilityReport:
    group: str
    order: int
    p: int
    potential: bool
    shape: str = ""
    n: int = 0
    ss: bool | None = None
    td: bool | None = None
    xc: bool | None = None
    witnesses: dict = field(default_factory=dict)
    thm_multiplicity: bool | None = None
    thm_converse: bool | None = None
    count: int | None = None

    def to_json(self) -> str:
        d = dict(self.__dict__)
        d["witnesses"] = {k: list(v) for k, v in self.witnesses.items()}
        return json.dumps(d, ensure_ascii=False)


def analyse(G: Group, p: int, with_count: bool = True) -> RealizabilityReport:
    pot = is_potentially_realizable(G, p, witness=False)[0]
    rep = RealizabilityReport(G.name or "", G.order, p, pot)
    if not pot:
        rep.count = 0 if with_count else None
        return rep
    dec = decompose(vw_module(G, p))
    pred = predicates_ss_td_xc(G, p)
    rep.shape, rep.n = dec.shape(), dec.n
    rep.ss, rep.td, rep.xc = pred.as_tuple()
    rep.witnesses = pred.witnesses
    rep.thm_multiplicity = thm_multiplicity_unrealizable(G, p, pred, dec)
    rep.thm_converse = thm_converse_realizable(G, p, dec)
    if with_count:
        rep.count = count(G, p).count
    return rep


def minimally_unrealizable_scan(entries, p: int, order_bound: int, reports: list | None = None) -> list:
    """Catalog entries that are potentially realizable, have count 0, and whose
    quotients by every minimal normal subgroup are realizable."""
    out = []
    for e in entries:
        G = e.group
        if G.order > order_bound or G.order == 1:
            continue
        if not is_potentially_realizable(G, p, witness=False)[0]:
            continue
        if is_realizable(G, p):
            continue
        if all(is_realizable(quotient(G, N)[0], p) for N in minimal_normal_subgroups(G)):
            out.append(e)
            if reports is not None:
                reports.append(analyse(G, p))
    return out
