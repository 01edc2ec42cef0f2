"""Command-line interface: ``pigp count | potential | survey | verify | catalog check``.

stdout carries only machine-readable output (JSON, JSON lines or CSV);
progress and diagnostics go to stderr.  Exit codes: 0 success, 1 failed
verification, 2 capacity exceeded, 3 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import sympy

from . import automorphisms, catalog
from .errors import CapacityError, CatalogError, PigpError, PreconditionError, UsageError

EXIT_OK, EXIT_VERIFY, EXIT_CAPACITY, EXIT_INPUT = 0, 1, 2, 3


# -- configuration ------------------------------------------------------------------

def _common(parser: argparse.ArgumentParser, need_p: bool = True) -> None:
    parser.add_argument("-p", type=int, required=need_p, help="odd prime")
    parser.add_argument("--catalog", action="append", default=[], metavar="PATH",
                        help="catalog file (repeatable; default: bundled catalog)")
    parser.add_argument("--group", help="catalog name or recipe, e.g. 'cyclic(12)'")
    parser.add_argument("--max-order", type=int, default=None)
    parser.add_argument("--method", choices=("auto", "abelian", "tame", "lifting"), default="auto")
    parser.add_argument("--json", dest="json_path", metavar="PATH", help="also write output to PATH")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--aut-budget", type=int, default=None, help="node budget of automorphism searches")
    parser.add_argument("--h-seed", type=int, default=None, help="primitive root seeding the root of unity h")
    parser.add_argument("--debug-dual-lift", action="store_true",
                        help="also lift with the x0/x1 sources swapped and report both counts")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pigp", description="Count Galois extensions of Q_p with a given group.")
    sub = ap.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("count", help="count extensions for one group"))
    pp = sub.add_parser("potential", help="potential realizability / tame candidates")
    _common(pp)
    pp.add_argument("--tame-order", type=int, default=None, help="list tame candidate groups of this order")
    _common(sub.add_parser("survey", help="counts for every catalog group up to --max-order"))
    vp = sub.add_parser("verify", help="run a cross-check suite")
    vp.add_argument("suite", choices=("shafarevich", "abelian-cross", "n-independence", "props", "conjecture"))
    _common(vp)
    cp = sub.add_parser("catalog", help="catalog utilities")
    csub = cp.add_subparsers(dest="catalog_command", required=True)
    _common(csub.add_parser("check", help="parse and validate catalogs"), need_p=False)
    return ap


def _validate(args) -> None:
    if args.p is not None and (args.p < 3 or not sympy.isprime(args.p)):
        raise UsageError("-p must be an odd prime")
    for name in ("max_order", "aut_budget", "tame_order"):
        v = getattr(args, name, None)
        if v is not None and v <= 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if args.aut_budget:
        automorphisms.DEFAULT_BUDGET = args.aut_budget


def _entries(paths):
    if not paths:
        return catalog.load_bundled()
    out, seen = [], set()
    for path in paths:
        for e in catalog.load_catalog(path):
            if e.name in seen:
                raise CatalogError(f"group {e.name!r} defined in more than one catalog")
            seen.add(e.name)
            out.append(e)
    return out


def _group(args):
    if not args.group:
        raise UsageError("--group is required")
    return catalog.resolve_group(args.group, _entries(args.catalog))


# -- output -----------------------------------------------------------------------------

def _flatten(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, (dict, list)):
            out[k] = json.dumps(v, separators=(",", ":"), ensure_ascii=False)
        else:
            out[k] = v
    return out


def _emit(args, records: list[dict], lines: bool = False) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        flat = [_flatten(r) for r in records]
        keys: list[str] = []
        for r in flat:
            keys += [k for k in r if k not in keys]
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        text = buf.getvalue()
    elif lines:
        text = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
    else:
        obj = records[0] if len(records) == 1 else records
        text = json.dumps(obj, ensure_ascii=False) + "\n"
    sys.stdout.write(text)
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# -- commands -----------------------------------------------------------------------------

def cmd_count(args) -> int:
    from .counting import count

    G = _group(args)
    res = count(G, args.p, method=args.method, h_seed=args.h_seed)
    rec = res.to_dict()
    if args.debug_dual_lift:
        if res.method == "lifting":
            dual = count(G, args.p, method="lifting", h_seed=args.h_seed, dual=True)
            rec["dual_count"] = dual.count
            if dual.count != res.count:
                _log(f"note: swapped x0/x1 lift sources give {dual.count}, not {res.count}")
        else:
            rec["dual_count"] = None
    _emit(args, [rec])
    return EXIT_OK


def cmd_potential(args) -> int:
    from .construct import fingerprint
    from .potential import is_potentially_realizable, tame_potential_groups

    if args.tame_order is not None:
        recs = [{"name": e.name, "order": e.group.order, "fingerprint": fingerprint(e.group)}
                for e in tame_potential_groups(args.tame_order, args.p)]
        if args.format == "csv":
            _emit(args, recs)
        else:
            _emit_list(args, recs)
        return EXIT_OK
    G = _group(args)
    ok, ts = is_potentially_realizable(G, args.p)
    rec = {"group": G.name, "order": G.order, "p": args.p, "potential": ok,
           "witness": ts.describe() if ts else None}
    _emit(args, [rec])
    return EXIT_OK


def _emit_list(args, recs):
    text = json.dumps(recs, ensure_ascii=False) + "\n"
    sys.stdout.write(text)
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _survey_one(job):
    paths, name, p, method, h_seed = job
    from .counting import count
    from .potential import is_potentially_realizable

    G = catalog.find_entry(_entries(paths), name).group
    t0 = time.perf_counter()
    try:
        pot = is_potentially_realizable(G, p, witness=False)[0]
        res = count(G, p, method=method, h_seed=h_seed)
        return {"group": name, "order": G.order, "p": p, "potential": pot, "method": res.method,
                "count": res.count, "millis": int(1000 * (time.perf_counter() - t0))}
    except CapacityError as exc:
        return {"group": name, "order": G.order, "p": p, "error": f"capacity: {exc}"}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PIGP_THREADS", "1")))
    except ValueError:
        return 1


def histogram(counts) -> dict[int, int]:
    """f(n) = number of groups with at least n representatives, for n = 1..max."""
    counts = list(counts)
    top = max(counts, default=0)
    return {n: sum(1 for c in counts if c >= n) for n in range(1, top + 1)}


def cmd_survey(args) -> int:
    entries = _entries(args.catalog)
    bound = args.max_order or 30
    jobs = [(args.catalog, e.name, args.p, args.method, args.h_seed) for e in entries if e.group.order <= bound]
    _log(f"survey: {len(jobs)} groups, order <= {bound}, p = {args.p}, workers = {_threads()}")
    if _threads() > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=_threads()) as pool:
            recs = list(pool.map(_survey_one, jobs))  # map preserves catalog order
    else:
        recs = [_survey_one(j) for j in jobs]
    hist = histogram(r["count"] for r in recs if "count" in r)
    summary = {"summary": True, "p": args.p, "max_order": bound, "groups": len(recs),
               "histogram": {str(k): v for k, v in hist.items()}}
    _emit(args, recs + ([summary] if args.format == "json" else []), lines=True)
    return EXIT_CAPACITY if any("error" in r for r in recs) else EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    entries = _entries(args.catalog)
    res = run_suite(args.suite, entries, args.p, args.max_order, args.h_seed)
    _log(f"{res.name}: checked {res.checked}, failures {len(res.failures)}, {res.seconds:.1f}s")
    _emit(args, [res.to_dict()])
    return EXIT_OK if res.ok else EXIT_VERIFY


def cmd_catalog_check(args) -> int:
    paths = args.catalog
    if not paths:
        entries = catalog.parse_catalog(catalog._bundled_text(), validate=True)
        label = "bundled"
    else:
        entries = _entries(paths)
        label = ",".join(paths)
    counts = catalog.order_counts(entries)
    _emit(args, [{"catalog": label, "groups": len(entries), "orders": {str(k): v for k, v in counts.items()}}])
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage; map to the input code
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        _validate(args)
        if args.command == "count":
            return cmd_count(args)
        if args.command == "potential":
            return cmd_potential(args)
        if args.command == "survey":
            return cmd_survey(args)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "catalog":
            return cmd_catalog_check(args)
    except CapacityError as exc:
        _log(f"capacity exceeded: {exc}")
        return EXIT_CAPACITY
    except (CatalogError, UsageError, PreconditionError, FileNotFoundError) as exc:
        _log(f"input error: {exc}")
        return EXIT_INPUT
    except PigpError as exc:  # pragma: no cover - other library errors
        _log(f"error: {exc}")
        return EXIT_INPUT
    return EXIT_INPUT  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
