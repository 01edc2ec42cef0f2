"""Automorphism groups, stabilisers, induced maps on quotients and tuple orbits."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .analysis import abelian_type
from .construct import iter_isomorphisms
from .errors import CapacityError, PreconditionError, UsageError
from .group import Group, Homomorphism, Quotient, Subgroup, quotient, small_generating_set

DEFAULT_BUDGET = 10 ** 7
MAX_AUT_ORDER = 2000  # largest |G| whose automorphism group is enumerated
ENUMERATION_LIMIT = 2_000_000  # largest |Aut(G)| enumerated when it is known in advance


class AutGroup:
    """A group of automorphisms of ``parent`` stored as a ``(k, n)`` image array.

    Row ``i`` is the image list of the ``i``-th automorphism; row 0 is the
    identity.  Composition ``a o b`` (apply ``b`` first) is ``a[b]``.
    """

    def __init__(self, parent: Group, maps: np.ndarray, verify: bool = False):
        maps = np.ascontiguousarray(maps, dtype=np.int32)
        if maps.ndim != 2 or maps.shape[1] != parent.order:
            raise ValueError("automorphism array has wrong shape")
        ident = np.arange(parent.order, dtype=np.int32)
        hit = np.nonzero((maps == ident).all(axis=1))[0]
        if hit.size == 0:
            raise ValueError("automorphism list lacks the identity")
        if hit[0] != 0:
            maps[[0, hit[0]]] = maps[[hit[0], 0]]
        maps.setflags(write=False)
        self.parent = parent
        self.maps = maps
        if verify:
            self.verify_closed()

    @property
    def order(self) -> int:
        return int(self.maps.shape[0])

    def __len__(self):
        return self.order

    def __iter__(self):
        for row in self.maps:
            yield Homomorphism(self.parent, self.parent, row)

    def __getitem__(self, i) -> Homomorphism:
        return Homomorphism(self.parent, self.parent, self.maps[i])

    def keys(self) -> set[bytes]:
        return {row.tobytes() for row in self.maps}

    def verify_closed(self, sample: int | None = None, seed: int = 0) -> None:
        """Check closure under composition and inverses (all pairs or ``sample`` random pairs)."""
        keys = self.keys()
        k = self.order
        if sample is None or k * k <= sample:
            pairs = ((i, j) for i in range(k) for j in range(k))
        else:
            rng = np.random.default_rng(seed)
            pairs = zip(rng.integers(0, k, sample).tolist(), rng.integers(0, k, sample).tolist())
        for i, j in pairs:
            if self.maps[i][self.maps[j]].tobytes() not in keys:
                raise AssertionError("automorphism list not closed under composition")
        for row in self.maps:
            inv = np.empty_like(row)
            inv[row] = np.arange(row.size, dtype=row.dtype)
            if inv.tobytes() not in keys:
                raise AssertionError("automorphism list not closed under inverses")


def automorphism_group(G: Group, budget: int | None = None, bound: int = MAX_AUT_ORDER) -> AutGroup:
    """All automorphisms of ``G`` by backtracking over images of a generating set.

    Generators are taken in descending element order; candidate images must
    share element order and conjugacy-class size, and each partial choice is
    extended multiplicatively (which enforces power-map compatibility).
    """
    hit = G._cache.get("aut")
    if hit is not None:
        return hit
    if G.order > bound:
        raise CapacityError(f"automorphism group of {G.name or 'group'} (order {G.order}) above bound {bound}")
    if G.is_abelian:
        size = abelian_automorphism_count(abelian_type(G))
        if size > ENUMERATION_LIMIT:
            raise CapacityError(f"automorphism group of {G.name or 'group'} has {size} elements "
                                f"(enumeration limit {ENUMERATION_LIMIT})")
    budget = DEFAULT_BUDGET if budget is None else budget
    gens = small_generating_set(G)
    maps = list(iter_isomorphisms(G, G, gens=gens, budget=budget))
    A = AutGroup(G, np.array(maps, dtype=np.int32).reshape(len(maps), G.order))
    G._cache["aut"] = A
    return A


def abelian_automorphism_count(primary: dict[int, list[int]]) -> int:
    """|Aut| of the abelian group with the given primary exponents (Hillar-Rhea formula)."""
    total = 1
    for p, exps in primary.items():
        e = sorted(exps)
        n = len(e)
        out = 1
        for k in range(1, n + 1):
            d = max(l for l in range(1, n + 1) if e[l - 1] == e[k - 1])
            c = min(l for l in range(1, n + 1) if e[l - 1] == e[k - 1])
            out *= p ** d - p ** (k - 1)
            out *= p ** (e[k - 1] * (n - d))
            out *= p ** ((e[k - 1] - 1) * (n - c + 1))
        total *= out
    return total


def automorphism_group_order(G: Group, budget: int | None = None) -> int:
    """|Aut(G)|, by formula for abelian groups and by enumeration otherwise."""
    if G.is_abelian:
        return abelian_automorphism_count(abelian_type(G))
    return automorphism_group(G, budget).order


def inner_automorphisms(G: Group) -> np.ndarray:
    """Image arrays of x -> g^-1 x g for every g (rows may repeat)."""
    t, inv = G.table, G.inv
    ar = np.arange(G.order)
    return t[inv[:, None], t[ar[None, :], ar[:, None]]]


def stabilizer_of_subgroup(A: AutGroup, N: Subgroup) -> AutGroup:
    """Automorphisms mapping ``N`` onto itself."""
    if N.parent is not A.parent:
        raise UsageError("subgroup of another group")
    keep = N.mask[A.maps[:, N.elements]].all(axis=1)
    return AutGroup(A.parent, A.maps[keep])


def induced_automorphisms(G: Group, N: Subgroup, A: AutGroup | None = None) -> tuple[Quotient, np.ndarray]:
    """Images in ``Aut(G/N)`` of the stabiliser of ``N`` (distinct rows, sorted)."""
    if A is None:
        A = automorphism_group(G)
    Q, proj = quotient(G, N)
    S = stabilizer_of_subgroup(A, N)
    induced = proj.images[S.maps[:, Q.section]]
    return Q, np.unique(induced, axis=0)


def induced_coset_reps(G: Group, N: Subgroup, A: AutGroup | None = None,
                       AQ: AutGroup | None = None) -> list[np.ndarray]:
    """Representatives ``alpha`` of the cosets ``H alpha`` of ``H`` = image of Stab(N) in Aut(G/N).

    Every automorphism of Q is ``h o alpha`` for some ``h`` in ``H`` and a unique
    representative ``alpha``.  The identity comes first.
    """
    if not N.is_normal():
        raise PreconditionError("N must be normal")
    Q, H = induced_automorphisms(G, N, A)
    if AQ is None:
        AQ = automorphism_group(Q)
    covered: set[bytes] = set()
    reps = []
    for alpha in AQ.maps:
        if alpha.tobytes() in covered:
            continue
        reps.append(alpha.copy())
        for row in H[:, alpha]:
            covered.add(row.astype(np.int32).tobytes())
    assert len(reps) * H.shape[0] == AQ.order
    return reps


def pack(quads: np.ndarray, n: int) -> np.ndarray:
    """Encode (s, t, x0, x1) rows as int64 codes ``((s n + t) n + x0) n + x1``."""
    q = np.asarray(quads, dtype=np.int64)
    return ((q[..., 0] * n + q[..., 1]) * n + q[..., 2]) * n + q[..., 3]


def unpack(codes, n: int) -> np.ndarray:
    c = np.asarray(codes, dtype=np.int64)
    x1 = c % n
    c = c // n
    x0 = c % n
    c = c // n
    return np.stack([c // n, c % n, x0, x1], axis=-1)


def tuple_orbit(t: Sequence, A: AutGroup) -> list[tuple[int, ...]]:
    """Sorted list of the distinct componentwise images of ``t`` under ``A``."""
    idx = []
    for x in t:
        if hasattr(x, "group"):
            if x.group is not A.parent:
                raise UsageError("tuple entry from another group")
            idx.append(x.index)
        else:
            idx.append(int(x))
    imgs = A.maps[:, idx]
    return [tuple(int(v) for v in row) for row in np.unique(imgs, axis=0)]


def orbit_codes(quad: Iterable[int], A: AutGroup) -> np.ndarray:
    """Packed codes of the A-orbit of a quadruple (unsorted, may repeat)."""
    s, t, x0, x1 = quad
    m = A.maps
    n = A.parent.order
    return ((m[:, s].astype(np.int64) * n + m[:, t]) * n + m[:, x0]) * n + m[:, x1]
