"""Compare the compiled and pure-Python kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--end-to-end]

Times ``closure``, ``wild_holds`` and ``lift_search`` on the same inputs with
both backends, checks that they return identical results, and optionally
times a full ``pigp count`` run under each backend (``PIGP_PURE=1`` forces the
pure-Python one).
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from pigp import _pykernels, catalog, kernels
from pigp.analysis import p_core
from pigp.relations import make_context

try:
    from pigp import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads(G, p, seed=0):
    ctx = make_context(G.order, p).kernel_ctx()
    rng = np.random.default_rng(seed)
    quads = rng.integers(0, G.order, size=(2000, 4)).tolist()
    V = p_core(G, p).elements.tolist()
    ts = [x for x in range(G.order) if G.element_order(x) % p]
    ss = list(range(G.order))
    gens = [list(rng.integers(0, G.order, size=2)) for _ in range(200)]

    def closure(mod):
        h = kernels.prepared(G, mod)
        return lambda: [sorted(mod.closure(h, [int(a), int(b)])) for a, b in gens]

    def wild(mod):
        h = kernels.prepared(G, mod)
        return lambda: [bool(mod.wild_holds(h, ctx, *q)) for q in quads]

    def lift(mod):
        h = kernels.prepared(G, mod)
        return lambda: sorted(map(tuple, mod.lift_search(h, ctx, V[:3], V, ts, ss)))

    return {"closure": closure, "wild_holds": wild, "lift_search": lift}


def end_to_end(group, p):
    out = {}
    for label, env in (("compiled", {}), ("python", {"PIGP_PURE": "1"})):
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-m", "pigp.cli", "count", "-p", str(p), "--group", group],
                       env=dict(os.environ, **env), check=True, capture_output=True)
        out[label] = time.perf_counter() - t0
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--end-to-end", action="store_true", help="also time full counts in subprocesses")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled backend not built; nothing to compare", file=sys.stderr)
        return 1
    entries = catalog.load_bundled()
    cases = [("Heis3", 3), ("Dih-C3^3", 3), ("Dih-C5^2", 5)]
    print(f"{'group':<10} {'p':>2} {'kernel':<12} {'cython s':>10} {'python s':>10} {'speed-up':>9}")
    for name, p in cases:
        G = catalog.find_entry(entries, name).group
        for kname, make in workloads(G, p).items():
            tc, rc = _best(make(_ckernels), args.repeat)
            tp, rp = _best(make(_pykernels), args.repeat)
            assert rc == rp, f"backends disagree on {kname} for {name}"
            print(f"{name:<10} {p:>2} {kname:<12} {tc:>10.4f} {tp:>10.4f} {tp / max(tc, 1e-9):>8.1f}x")
    if args.end_to_end:
        for name, p in [("Dih-C3^3", 3), ("F3^2:D8", 3)]:
            t = end_to_end(name, p)
            print(f"count {name} p={p}: compiled {t['compiled']:.2f}s, python {t['python']:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
