"""Cross-check suites over a catalog (driven by ``pigp verify`` and the tests)."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .analysis import p_core
from .counting import count, count_abelian, count_lifting, is_realizable, shafarevich_count
from .errors import CapacityError
from .group import all_normal_subgroups, minimal_normal_subgroups, quotient
from .potential import is_potentially_realizable, semidirect_conjecture_holds, tame_structures
from .realizability import (
    decompose,
    predicates_ss_td_xc,
    thm_converse_realizable,
    thm_multiplicity_unrealizable,
    vw_module,
)

SUITES = ("shafarevich", "abelian-cross", "n-independence", "props", "conjecture")


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, **info) -> None:
        self.failures.append(info)

    def to_dict(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "checked": self.checked, "skipped": self.skipped,
                "failures": self.failures, "seconds": round(self.seconds, 2), "notes": self.notes}


def _is_p_group(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _entries(entries, max_order: int):
    return [e for e in entries if e.group.order <= max_order]


def shafarevich_suite(entries, p: int, max_order: int = 243, h_seed=None) -> SuiteResult:
    """Forced lifting against the closed formula on every p-group in range."""
    res = SuiteResult(f"shafarevich(p={p})")
    t0 = time.perf_counter()
    for e in _entries(entries, max_order):
        G = e.group
        if G.order == 1 or not _is_p_group(G.order, p):
            continue
        expected = shafarevich_count(G, p)
        got = count_lifting(G, p, h_seed).count
        res.checked += 1
        if expected.denominator != 1 or got != expected:
            res.fail(group=e.name, p=p, h_seed=h_seed, lifting=got, formula=str(expected))
    res.seconds = time.perf_counter() - t0
    return res


def abelian_cross_suite(entries, p: int, max_order: int = 100, h_seed=None) -> SuiteResult:
    res = SuiteResult(f"abelian-cross(p={p})")
    t0 = time.perf_counter()
    for e in _entries(entries, max_order):
        G = e.group
        if not G.is_abelian:
            continue
        a = count_abelian(G, p, h_seed).count
        b = count(G, p, method="lifting", h_seed=h_seed).count
        res.checked += 1
        if a != b:
            res.fail(group=e.name, p=p, h_seed=h_seed, abelian=a, lifting=b)
    res.seconds = time.perf_counter() - t0
    return res


def n_independence_suite(entries, p: int, max_order: int = 100, h_seed=None) -> SuiteResult:
    """Lifting through every minimal normal subgroup of nonabelian groups with nontrivial p-core."""
    res = SuiteResult(f"n-independence(p={p})")
    t0 = time.perf_counter()
    names, several = [], 0
    for e in _entries(entries, max_order):
        G = e.group
        if G.is_abelian or p_core(G, p).order == 1:
            continue
        if not is_potentially_realizable(G, p, witness=False)[0]:
            continue
        counts = [count_lifting(G, p, h_seed, N=N).count for N in minimal_normal_subgroups(G)]
        res.checked += 1
        names.append(e.name)
        several += len(counts) > 1
        if len(set(counts)) != 1:
            res.fail(group=e.name, p=p, h_seed=h_seed, counts=counts)
    res.notes.append({"groups": names, "with_several_choices": several})
    res.seconds = time.perf_counter() - t0
    return res


def props_suite(entries, p: int, max_order: int = 200, h_seed=None) -> SuiteResult:
    """Quotient closure, enlarged tame structures, TD => XC, and soundness of both theorems."""
    res = SuiteResult(f"props(p={p})")
    t0 = time.perf_counter()
    stats = {"quotient": 0, "enlarged": 0, "td_xc": 0, "thm_mult": 0, "thm_conv": 0}
    for e in _entries(entries, max_order):
        G = e.group
        pot, ts = is_potentially_realizable(G, p)
        if not pot:
            continue
        res.checked += 1
        # quotient closure of potential realizability
        for N in all_normal_subgroups(G):
            if N.order in (1, G.order):
                continue
            Q, _ = quotient(G, N)
            stats["quotient"] += 1
            if not is_potentially_realizable(Q, p, witness=False)[0]:
                res.fail(prop="quotient-closure", group=e.name, p=p, N=N.order)
        # enlarging a tame structure by the p-core
        structs = [ts]
        try:
            structs += tame_structures(G, p)
        except CapacityError:
            pass
        for s in structs:
            stats["enlarged"] += 1
            bad = s.enlarged(p).violations(p)
            if bad:
                res.fail(prop="enlarged-structure", group=e.name, p=p, structure=s.describe(), violations=bad)
        pred = predicates_ss_td_xc(G, p, h_seed)
        stats["td_xc"] += 1
        if pred.td and not pred.xc:
            res.fail(prop="td-implies-xc", group=e.name, p=p, witness=pred.witnesses.get("xc"))
        dec = decompose(vw_module(G, p))
        if thm_multiplicity_unrealizable(G, p, pred, dec):
            stats["thm_mult"] += 1
            c = count(G, p, h_seed=h_seed).count
            if c != 0:
                res.fail(prop="multiplicity-theorem", group=e.name, p=p, h_seed=h_seed, count=c)
        if thm_converse_realizable(G, p, dec):
            stats["thm_conv"] += 1
            if not is_realizable(G, p, h_seed):
                res.fail(prop="converse-theorem", group=e.name, p=p, h_seed=h_seed)
    res.notes.append(stats)
    res.seconds = time.perf_counter() - t0
    return res


def conjecture_suite(entries, p: int, max_order: int = 200) -> SuiteResult:
    """A complement to V in every potentially realizable group."""
    res = SuiteResult(f"conjecture(p={p})")
    t0 = time.perf_counter()
    for e in _entries(entries, max_order):
        G = e.group
        if not is_potentially_realizable(G, p, witness=False)[0]:
            continue
        res.checked += 1
        ok, _ = semidirect_conjecture_holds(G, p)
        if not ok:
            res.fail(group=e.name, p=p, finding="no complement to the p-core")
    res.seconds = time.perf_counter() - t0
    return res


def run_suite(name: str, entries, p: int, max_order: int | None = None, h_seed=None) -> SuiteResult:
    if name == "shafarevich":
        return shafarevich_suite(entries, p, max_order or 243, h_seed)
    if name == "abelian-cross":
        return abelian_cross_suite(entries, p, max_order or 100, h_seed)
    if name == "n-independence":
        return n_independence_suite(entries, p, max_order or 100, h_seed)
    if name == "props":
        return props_suite(entries, p, max_order or 200, h_seed)
    if name == "conjecture":
        return conjecture_suite(entries, p, max_order or 200)
    raise ValueError(f"unknown suite {name!r}")
