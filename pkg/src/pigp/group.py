"""Finite groups given by an explicit multiplication table.

Elements are the integers ``0 .. n-1`` with ``0`` the identity.  Most of the
library works directly on these indices; :class:`Elem` is a thin wrapper for
callers who prefer operator syntax.

Conventions: ``x^y = y^-1 x y`` and ``[x, y] = x^-1 y^-1 x y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import CapacityError, PreconditionError, UsageError

MAX_ORDER = 4096


class Group:
    """An immutable finite group on ``range(n)`` with identity ``0``.

    ``table[x, y]`` is the index of ``x * y``.  ``gens`` must generate the
    group; it is used by homomorphism and automorphism searches.
    """

    def __init__(self, table, gens: Iterable[int] = (), name: str = "", perms=None):
        table = np.ascontiguousarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n) or n < 1:
            raise ValueError("multiplication table must be square and non-empty")
        if n > MAX_ORDER:
            raise CapacityError(f"group order {n} exceeds supported bound {MAX_ORDER}")
        if not (np.array_equal(table[0], np.arange(n)) and np.array_equal(table[:, 0], np.arange(n))):
            raise ValueError("element 0 must be the identity")
        table.setflags(write=False)
        self.table = table
        self.order = n
        self.name = name
        self.gens = tuple(sorted({int(g) for g in gens if g}))
        # faithful permutation generators (0-based image lists), if known
        self.perms = perms
        self._cache = {}
        inv = np.argmin(table, axis=1).astype(np.int32)
        if not np.all(table[np.arange(n), inv] == 0):
            raise ValueError("table is not a group: missing inverses")
        inv.setflags(write=False)
        self.inv = inv

    def __repr__(self):
        label = self.name or "Group"
        return f"<{label} of order {self.order}>"

    def __len__(self):
        return self.order

    # element level ---------------------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inverse(self, x: int) -> int:
        return int(self.inv[x])

    def pow(self, x: int, k: int) -> int:
        return kernels.backend.power(kernels.prepared(self), int(x), int(k))

    def conj(self, x: int, y: int) -> int:
        """``x^y = y^-1 x y``."""
        t = self.table
        return int(t[t[self.inv[y], x], y])

    def comm(self, x: int, y: int) -> int:
        """``[x, y] = x^-1 y^-1 x y``."""
        t, inv = self.table, self.inv
        return int(t[t[inv[x], inv[y]], t[x, y]])

    def elem(self, i: int) -> "Elem":
        if not 0 <= i < self.order:
            raise UsageError(f"index {i} out of range for order {self.order}")
        return Elem(self, int(i))

    def elements(self) -> list["Elem"]:
        return [Elem(self, i) for i in range(self.order)]

    @property
    def identity(self) -> "Elem":
        return Elem(self, 0)

    # cached structure ------------------------------------------------------

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        cur = ar.copy()
        orders = np.zeros(n, dtype=np.int32)
        k = 1
        while True:
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.table[cur, ar]
            k += 1
        orders.setflags(write=False)
        return orders

    def element_order(self, x: int) -> int:
        return int(self.element_orders[x])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        """Classes as sorted tuples, ordered by smallest member."""
        n = self.order
        seen = np.zeros(n, dtype=bool)
        t, inv = self.table, self.inv
        ar = np.arange(n)
        classes = []
        for x in range(n):
            if seen[x]:
                continue
            cls = np.unique(t[inv, t[x, ar]])
            seen[cls] = True
            classes.append(tuple(int(c) for c in cls))
        return classes

    @cached_property
    def class_sizes(self) -> np.ndarray:
        sizes = np.zeros(self.order, dtype=np.int32)
        for cls in self.conjugacy_classes:
            sizes[list(cls)] = len(cls)
        return sizes

    @cached_property
    def center(self) -> "Subgroup":
        t = self.table
        mask = np.all(t == t.T, axis=1)
        elems = np.nonzero(mask)[0]
        return Subgroup(self, elems, _trusted=True)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order), self.gens, _trusted=True)

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, [0], (), _trusted=True)

    def is_cyclic(self) -> bool:
        return int(self.element_orders.max()) == self.order

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        return subgroup_generated(self, gens)


@dataclass(frozen=True)
class Elem:
    """An element of a specific group; supports ``*``, ``**`` and ``~``."""

    group: Group
    index: int

    def _check(self, other):
        if not isinstance(other, Elem) or other.group is not self.group:
            raise UsageError("elements of different groups cannot be combined")

    def __mul__(self, other):
        self._check(other)
        return Elem(self.group, self.group.mul(self.index, other.index))

    def __invert__(self):
        return Elem(self.group, self.group.inverse(self.index))

    def __pow__(self, k: int):
        return Elem(self.group, self.group.pow(self.index, k))

    def conj(self, other):
        self._check(other)
        return Elem(self.group, self.group.conj(self.index, other.index))

    def comm(self, other):
        self._check(other)
        return Elem(self.group, self.group.comm(self.index, other.index))

    @property
    def order(self) -> int:
        return self.group.element_order(self.index)

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"Elem({self.group.name or 'G'}, {self.index})"


def element_arithmetic(x: Elem, y: Elem | None, kind: str, k: int = 1) -> Elem:
    """Dispatch ``mul``, ``inv``, ``pow``, ``conj`` (``x^y``) or ``comm`` (``[x, y]``)."""
    if kind == "inv":
        return ~x
    if kind == "pow":
        return x ** k
    if y is None:
        raise UsageError(f"{kind} needs two operands")
    x._check(y)
    if kind == "mul":
        return x * y
    if kind == "conj":
        return x.conj(y)
    if kind == "comm":
        return x.comm(y)
    raise UsageError(f"unknown operation {kind!r}")


def element_order(x: Elem) -> int:
    return x.order


class Subgroup:
    """A subgroup of ``parent`` stored as a sorted array of element indices."""

    def __init__(self, parent: Group, elements, gens: Iterable[int] = (), _trusted: bool = False):
        self.parent = parent
        elems = np.unique(np.asarray(elements, dtype=np.int32))
        self.elements = elems
        self.gens = tuple(int(g) for g in gens)
        mask = np.zeros(parent.order, dtype=bool)
        mask[elems] = True
        self.mask = mask
        if not _trusted:
            self._validate()

    def _validate(self):
        G = self.parent
        e = self.elements
        if e.size == 0 or e[0] != 0:
            raise ValueError("subgroup must contain the identity")
        if G.order % e.size:
            raise ValueError("subgroup order does not divide group order")
        if not self.mask[G.table[np.ix_(e, e)]].all() or not self.mask[G.inv[e]].all():
            raise ValueError("element set is not closed")

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def __len__(self):
        return self.order

    def __contains__(self, x) -> bool:
        if isinstance(x, Elem):
            x = x.index
        return bool(self.mask[x])

    def __iter__(self):
        return iter(self.elements.tolist())

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and np.array_equal(other.elements, self.elements)
        )

    def __hash__(self):
        return hash((id(self.parent), self.key))

    @cached_property
    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.elements].all())

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def is_normal(self) -> bool:
        G = self.parent
        t, inv = G.table, G.inv
        e = self.elements
        for g in G.gens:
            if not self.mask[t[inv[g], t[e, g]]].all():
                return False
        return True

    def is_cyclic(self) -> bool:
        return int(self.parent.element_orders[self.elements].max()) == self.order

    def generators(self) -> tuple[int, ...]:
        if not self.gens and self.order > 1:
            self.gens = small_generating_set(self.parent, self.elements)
        return self.gens

    def as_group(self, name: str = "") -> tuple[Group, np.ndarray]:
        """The subgroup as a standalone group plus the embedding (new index -> old)."""
        G = self.parent
        e = self.elements
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[e] = np.arange(e.size)
        table = pos[G.table[np.ix_(e, e)]]
        gens = [int(pos[g]) for g in self.generators()]
        return Group(table, gens, name=name), e.copy()

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self.parent!r}>"


class Homomorphism:
    """A homomorphism given by its full image table."""

    def __init__(self, domain: Group, codomain: Group, images, check: bool = False):
        self.domain = domain
        self.codomain = codomain
        images = np.asarray(images, dtype=np.int32)
        if images.shape != (domain.order,):
            raise ValueError("image table has wrong length")
        images.setflags(write=False)
        self.images = images
        if check and not self.is_homomorphism():
            raise ValueError("map is not a homomorphism")

    def __call__(self, x):
        if isinstance(x, Elem):
            if x.group is not self.domain:
                raise UsageError("element not in the domain")
            return Elem(self.codomain, int(self.images[x.index]))
        return int(self.images[x])

    def is_homomorphism(self) -> bool:
        G, H, im = self.domain, self.codomain, self.images
        if im[0] != 0:
            return False
        return bool(np.array_equal(im[G.table], H.table[np.ix_(im, im)]))

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, np.nonzero(self.images == 0)[0], _trusted=True)

    def image(self) -> Subgroup:
        return Subgroup(self.codomain, np.unique(self.images), _trusted=True)

    def is_injective(self) -> bool:
        return np.unique(self.images).size == self.domain.order

    def is_surjective(self) -> bool:
        return np.unique(self.images).size == self.codomain.order

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """``self o other`` (apply ``other`` first)."""
        return Homomorphism(other.domain, self.codomain, self.images[other.images])


# -- subgroup machinery -------------------------------------------------------

def _closure(G: Group, gens) -> list[int]:
    return kernels.backend.closure(kernels.prepared(G), [int(g) for g in gens])


def subgroup_generated(G: Group, gens: Iterable) -> Subgroup:
    """Smallest subgroup containing ``gens``."""
    gl = [g.index if isinstance(g, Elem) else int(g) for g in gens]
    for g in gl:
        if not 0 <= g < G.order:
            raise UsageError(f"element {g} not in group")
    return Subgroup(G, _closure(G, gl), [g for g in gl if g], _trusted=True)


def generates(G: Group, gens: Iterable[int]) -> bool:
    return kernels.backend.closure_size(kernels.prepared(G), [int(g) for g in gens]) == G.order


def small_generating_set(G: Group, elements=None) -> tuple[int, ...]:
    """Greedy generating set for the subgroup on ``elements`` (default: all of G).

    Repeatedly adds the element of largest order not yet covered.
    """
    if elements is None:
        elements = np.arange(G.order)
    elements = np.asarray(elements)
    target = elements.size
    ords = G.element_orders[elements]
    cand = elements[np.lexsort((elements, -ords))]
    gens: list[int] = []
    covered = np.zeros(G.order, dtype=bool)
    covered[0] = True
    size = 1
    for x in cand.tolist():
        if size == target:
            break
        if covered[x]:
            continue
        gens.append(x)
        h = _closure(G, gens)
        covered[h] = True
        size = len(h)
    return tuple(gens)


def normal_closure(G: Group, elems: Iterable[int]) -> Subgroup:
    t, inv = G.table, G.inv
    gens = set(int(x) for x in elems)
    while True:
        H = _closure(G, sorted(gens))
        mask = np.zeros(G.order, dtype=bool)
        mask[H] = True
        extra = set()
        for g in G.gens:
            conj = t[inv[g], t[np.asarray(H), g]]
            bad = conj[~mask[conj]]
            extra.update(int(b) for b in bad[:1])
        if not extra:
            return Subgroup(G, H, _trusted=True)
        gens |= extra


def _product_mask(G: Group, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.table[np.ix_(a, b)].ravel()] = True
    return mask


def all_normal_subgroups(G: Group) -> list[Subgroup]:
    """All normal subgroups, sorted by (order, elements)."""
    cached = G._cache.get("normal_subgroups")
    if cached is not None:
        return cached
    base = {}
    for cls in G.conjugacy_classes:
        if cls == (0,):
            continue
        N = normal_closure(G, cls)
        base.setdefault(N.key, N)
    found = {G.trivial.key: G.trivial}
    found.update(base)
    frontier = list(base.values())
    base_list = list(base.values())
    while frontier:
        new = []
        for A in frontier:
            for B in base_list:
                if B.issubset(A) or A.issubset(B):
                    continue
                mask = _product_mask(G, A.elements, B.elements)
                key = np.packbits(mask).tobytes()
                if key not in found:
                    S = Subgroup(G, np.nonzero(mask)[0], _trusted=True)
                    found[key] = S
                    new.append(S)
        frontier = new
    result = sorted(found.values(), key=lambda S: (S.order, S.elements.tolist()))
    G._cache["normal_subgroups"] = result
    return result


def normal_subgroups(G: Group, above: Subgroup | None = None) -> list[Subgroup]:
    """Normal subgroups of G containing ``above`` (default: all)."""
    if above is None:
        return list(all_normal_subgroups(G))
    if above.parent is not G:
        raise UsageError("subgroup belongs to another group")
    if not above.is_normal():
        raise PreconditionError("'above' must be a normal subgroup")
    return [N for N in all_normal_subgroups(G) if above.issubset(N)]


def minimal_normal_subgroups(G: Group) -> list[Subgroup]:
    allN = [N for N in all_normal_subgroups(G) if N.order > 1]
    out = []
    for N in allN:
        if not any(M.order < N.order and M.issubset(N) for M in allN):
            out.append(N)
    return out


class Quotient(Group):
    """``G/N`` with cosets numbered by their smallest element."""

    def __init__(self, table, gens, name, parent, kernel, section):
        super().__init__(table, gens, name=name)
        self.parent = parent
        self.kernel = kernel
        self.section = section


def quotient(G: Group, N: Subgroup, name: str = "") -> tuple[Quotient, Homomorphism]:
    """Quotient group and projection ``G -> G/N``."""
    if N.parent is not G:
        raise UsageError("subgroup belongs to another group")
    if not N.is_normal():
        raise PreconditionError("quotient needs a normal subgroup")
    key = ("quotient", N.key)
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    n = G.order
    coset = np.full(n, -1, dtype=np.int32)
    reps = []
    ne = N.elements
    for x in range(n):
        if coset[x] < 0:
            coset[G.table[x, ne]] = len(reps)
            reps.append(x)
    reps = np.asarray(reps, dtype=np.int32)
    qt = coset[G.table[np.ix_(reps, reps)]]
    gens = sorted({int(coset[g]) for g in G.gens} - {0})
    Q = Quotient(qt, gens, name or (f"{G.name}/N{N.order}" if G.name else ""), G, N, reps)
    proj = Homomorphism(G, Q, coset)
    G._cache[key] = (Q, proj)
    return Q, proj


def homomorphism_from_images(G: Group, gens: Sequence, images: Sequence, H: Group | None = None):
    """The homomorphism extending ``gens[i] -> images[i]``, or ``None``.

    ``H`` defaults to the group of the images (when given as :class:`Elem`).
    """
    gl = [g.index if isinstance(g, Elem) else int(g) for g in gens]
    if H is None:
        if not images or not isinstance(images[0], Elem):
            raise UsageError("codomain must be given when images are indices")
        H = images[0].group
    il = []
    for v in images:
        if isinstance(v, Elem):
            if v.group is not H:
                raise UsageError("images must lie in one group")
            il.append(v.index)
        else:
            il.append(int(v))
    if len(gl) != len(il):
        raise UsageError("gens and images differ in length")
    img = kernels.backend.extend_map(kernels.prepared(G), kernels.prepared(H), gl, il, False)
    if img is None:
        if not generates(G, gl):
            raise PreconditionError("gens do not generate the domain")
        return None
    if min(img) < 0:
        raise PreconditionError("gens do not generate the domain")
    return Homomorphism(G, H, img)


def check_axioms(G: Group, triples: int = 10_000, seed: int = 0) -> None:
    """Assert identity/inverse/latin-square laws and sampled associativity.

    Associativity is checked exhaustively when ``n**3 <= 2e6`` and on
    ``triples`` random triples otherwise.
    """
    t = G.table
    n = G.order
    ar = np.arange(n)
    assert np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)
    assert np.all(np.sort(t, axis=1) == ar) and np.all(np.sort(t, axis=0) == ar[:, None])
    assert np.all(t[ar, G.inv] == 0) and np.all(t[G.inv, ar] == 0)
    if n ** 3 <= 2_000_000:
        lhs = t[t[:, :, None], ar[None, None, :]]
        rhs = t[ar[:, None, None], t[None, :, :]]
        assert np.array_equal(lhs, rhs), "associativity fails"
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, triples))
        assert np.array_equal(t[t[x, y], z], t[x, t[y, z]]), "associativity fails"
    if G.gens or n > 1:
        assert generates(G, G.gens), "generators do not generate the group"
