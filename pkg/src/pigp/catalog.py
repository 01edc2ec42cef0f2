"""Line-oriented group catalogs.

Format (UTF-8, ``#`` starts a comment)::

    group <name> perm <degree>
    gen <img(1)> ... <img(degree)>      # 1-based images, one line per generator
    end

    group <name> construct <recipe>
    note <free text>                    # optional, any block
    end

Recipes: ``cyclic(n)``, ``abelian(n1,n2,...)``, ``direct(A,B)``,
``semidirect(V,T,[..],[..])`` (one bracketed image list on V's indices per
generator of T, in ``T.gens`` order; no lists means the trivial action),
``metacyclic(k,m,l,r)``, ``quaternion8``, ``heisenberg(p)``, and the
extras ``elementary(p,k)``, ``dihedral(m)`` (order 2m), ``dicyclic(m)``
(order 4m), ``gdihedral(A)``, ``symmetric(d)``, ``alternating(d)``.
Names referenced by recipes must be defined earlier in the same catalog.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from . import construct as C
from .errors import CatalogError, PigpError
from .group import Group, check_axioms

_NAME = re.compile(r"^[^\s()\[\],#]+$")
_CALL = re.compile(r"^([a-z_0-9]+)(?:\((.*)\))?$", re.S)


@dataclass
class CatalogEntry:
    name: str
    recipe: str  # recipe text, or "perm" for generator blocks
    group: Group
    note: str = ""
    gens: list = field(default_factory=list)  # 0-based permutation generators for perm blocks

    def __repr__(self):
        return f"CatalogEntry({self.name!r}, order={self.group.order})"


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail or out:
        out.append(tail)
    return out


def _ints(args, n=None, what="recipe"):
    try:
        vals = [int(a) for a in args]
    except ValueError as exc:
        raise CatalogError(f"{what}: integer arguments expected") from exc
    if n is not None and len(vals) != n:
        raise CatalogError(f"{what}: expected {n} arguments, got {len(vals)}")
    return vals


def build_recipe(recipe: str, known: dict[str, Group] | None = None) -> Group:
    """Evaluate a recipe string; ``known`` resolves names of earlier entries."""
    known = known or {}
    m = _CALL.match(recipe.strip())
    if not m:
        raise CatalogError(f"cannot parse recipe {recipe!r}")
    op, argtext = m.group(1), m.group(2)
    args = _split_args(argtext) if argtext is not None else []

    def ref(name):
        if name not in known:
            raise CatalogError(f"unknown group {name!r} in recipe")
        return known[name]

    try:
        if op == "cyclic":
            (n,) = _ints(args, 1, op)
            if n < 1:
                raise CatalogError("cyclic order must be positive")
            return C.cyclic_group(n)
        if op == "abelian":
            fs = _ints(args, None, op)
            if any(f < 1 for f in fs):
                raise CatalogError("abelian factors must be positive")
            return C.abelian_group(fs)
        if op == "elementary":
            p, k = _ints(args, 2, op)
            return C.elementary_abelian(p, k)
        if op == "direct":
            if len(args) != 2:
                raise CatalogError("direct needs two names")
            return C.direct_product(ref(args[0]), ref(args[1]))
        if op == "semidirect":
            if len(args) < 2:
                raise CatalogError("semidirect needs V and T")
            V, T = ref(args[0]), ref(args[1])
            acts = []
            for a in args[2:]:
                if not (a.startswith("[") and a.endswith("]")):
                    raise CatalogError("action images must be bracketed lists")
                acts.append(_ints(a[1:-1].replace(",", " ").split(), V.order, "action"))
            return C.semidirect_product(V, T, acts or None)
        if op == "metacyclic":
            k, mm, ell, r = _ints(args, 4, op)
            G = C.metacyclic_group(k, mm, ell, r)
            if G is None:
                raise CatalogError(f"inconsistent metacyclic parameters {args}")
            return G
        if op == "quaternion8":
            if args:
                raise CatalogError("quaternion8 takes no arguments")
            return C.quaternion8()
        if op == "heisenberg":
            (p,) = _ints(args, 1, op)
            return C.heisenberg_group(p)
        if op == "dihedral":
            (n,) = _ints(args, 1, op)
            return C.dihedral_group(n)
        if op == "dicyclic":
            (n,) = _ints(args, 1, op)
            return C.dicyclic_group(n)
        if op == "gdihedral":
            if len(args) != 1:
                raise CatalogError("gdihedral needs one name")
            return C.generalized_dihedral(ref(args[0]))
        if op == "symmetric":
            (d,) = _ints(args, 1, op)
            return C.symmetric_group(d)
        if op == "alternating":
            (d,) = _ints(args, 1, op)
            return C.alternating_group(d)
    except CatalogError:
        raise
    except PigpError as exc:
        raise CatalogError(str(exc)) from exc
    raise CatalogError(f"unknown recipe {op!r}")


def parse_catalog(text: str, validate: bool = True) -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    known: dict[str, Group] = {}
    cur = None  # [name, kind, degree_or_recipe, gens, note, start_line]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "group":
            if cur is not None:
                raise CatalogError("'group' inside an open block (missing 'end')", lineno)
            if len(words) < 4 or words[2] not in ("perm", "construct"):
                raise CatalogError("expected 'group <name> perm <degree>' or 'group <name> construct <recipe>'", lineno)
            name = words[1]
            if not _NAME.match(name):
                raise CatalogError(f"invalid group name {name!r}", lineno)
            if name in known:
                raise CatalogError(f"duplicate group name {name!r}", lineno)
            if words[2] == "perm":
                if len(words) != 4 or not words[3].isdigit() or int(words[3]) < 1:
                    raise CatalogError("perm degree must be a positive integer", lineno)
                cur = [name, "perm", int(words[3]), [], "", lineno]
            else:
                cur = [name, "construct", " ".join(words[3:]).replace(" ", ""), [], "", lineno]
        elif head == "gen":
            if cur is None or cur[1] != "perm":
                raise CatalogError("'gen' outside a perm block", lineno)
            try:
                img = [int(w) - 1 for w in words[1:]]
            except ValueError as exc:
                raise CatalogError("generator images must be integers", lineno) from exc
            if len(img) != cur[2]:
                raise CatalogError(f"generator has {len(img)} images, degree is {cur[2]}", lineno)
            if sorted(img) != list(range(cur[2])):
                raise CatalogError("generator is not a bijection of 1..degree", lineno)
            cur[3].append(img)
        elif head == "note":
            if cur is None:
                raise CatalogError("'note' outside a block", lineno)
            cur[4] = (cur[4] + " " + line[4:].strip()).strip()
        elif head == "end":
            if cur is None:
                raise CatalogError("'end' without 'group'", lineno)
            name, kind, spec, gens, note, start = cur
            try:
                if kind == "perm":
                    G = C.group_from_permutations(gens, name=name) if gens else C.cyclic_group(1)
                    recipe = "perm"
                else:
                    G = build_recipe(spec, known)
                    recipe = spec
            except CatalogError as exc:
                raise CatalogError(str(exc), start) from exc
            except PigpError as exc:
                raise CatalogError(str(exc), start) from exc
            G.name = name
            if validate:
                try:
                    check_axioms(G)
                except AssertionError as exc:
                    raise CatalogError(f"group {name!r} fails the axioms: {exc}", start) from exc
            known[name] = G
            entries.append(CatalogEntry(name, recipe, G, note, gens))
            cur = None
        else:
            raise CatalogError(f"unexpected keyword {head!r}", lineno)
    if cur is not None:
        raise CatalogError("unterminated block at end of file", cur[5])
    return entries


def regular_permutations(G: Group) -> list[list[int]]:
    """0-based right-regular images ``x -> x g`` for each generator."""
    return [G.table[:, g].tolist() for g in G.gens]


def serialize_entry(name: str, G: Group, note: str = "") -> str:
    perms = G.perms if G.perms else regular_permutations(G)
    degree = len(perms[0]) if perms else 1
    lines = [f"group {name} perm {degree}"]
    if note:
        lines.append(f"note {note}")
    for g in perms:
        lines.append("gen " + " ".join(str(v + 1) for v in g))
    lines.append("end")
    return "\n".join(lines)


def serialize(entries) -> str:
    """Serialize entries as ``perm`` blocks (regular representation when no action is stored)."""
    return "\n\n".join(serialize_entry(e.name, e.group, e.note) for e in entries) + "\n"


def load_catalog(path) -> list[CatalogEntry]:
    return parse_catalog(Path(path).read_text(encoding="utf-8"))


@lru_cache(maxsize=1)
def _bundled_text() -> str:
    return resources.files("pigp").joinpath("data/catalog.txt").read_text(encoding="utf-8")


_BUNDLED: list | None = None


def load_bundled() -> list[CatalogEntry]:
    """The bundled catalog (parsed once per process)."""
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = parse_catalog(_bundled_text(), validate=False)
    return _BUNDLED


def find_entry(entries, name: str) -> CatalogEntry | None:
    for e in entries:
        if e.name == name:
            return e
    return None


def resolve_group(selector: str, entries=None) -> Group:
    """A group from a catalog name or a recipe (recipes may reference catalog names)."""
    entries = load_bundled() if entries is None else entries
    e = find_entry(entries, selector)
    if e is not None:
        return e.group
    known = {x.name: x.group for x in entries}
    G = build_recipe(selector, known)
    G.name = selector.replace(" ", "")
    return G


def order_counts(entries) -> dict[int, int]:
    out: dict[int, int] = {}
    for e in entries:
        out[e.group.order] = out.get(e.group.order, 0) + 1
    return dict(sorted(out.items()))


def all_orders(entries) -> np.ndarray:
    return np.array(sorted({e.group.order for e in entries}))
