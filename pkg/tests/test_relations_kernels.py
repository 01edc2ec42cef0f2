"""Relation contexts and the cross-check of both kernel backends against the Elem evaluators."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pigp import _pykernels, kernels
from pigp.analysis import p_core
from pigp.construct import cyclic_group, heisenberg_group, symmetric_group
from pigp.errors import PreconditionError, UsageError
from pigp.group import _closure
from pigp.relations import (
    RhoWord,
    angle_bracket,
    curly_bracket,
    make_context,
    teichmuller,
    tame_relation_holds,
    wild_relation_holds,
    y1,
)

try:
    from pigp import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


def test_context_values():
    c = make_context(18, 3)
    assert (c.a, c.b, c.h, c.b_lift, c.seed, c.r, c.u_p) == (14, 9, 8, 9, 2, 2, 2)
    c.check()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3000), st.sampled_from([3, 5, 7, 11, 13]))
def test_context_congruences(n, p):
    c = make_context(n, p)  # check() runs inside
    assert c.a % c.u_p == 0
    assert ((p - 1) * c.a) % c.pr == 1 % c.pr
    assert c.b % 2 ** c.s == 1 % 2 ** c.s and c.b % c.u_2 == 0
    assert pow(c.h, p - 1, c.pr) == 1 % c.pr
    assert (c.b_lift - c.b) % n == 0
    # b_lift is also the image of pi_2 modulo p - 1: 1 on the 2-part, 0 on the odd part
    two = (p - 1) & -(p - 1)
    odd = (p - 1) // two
    assert c.b_lift % two == 1 % two and c.b_lift % odd == 0


def test_context_errors():
    with pytest.raises(PreconditionError):
        make_context(12, 4)
    with pytest.raises(PreconditionError):
        make_context(12, 7, h_seed=2)  # 2 is not a primitive root mod 7
    assert make_context(12, 7, h_seed=5).seed == 5


def test_teichmuller():
    for p in (3, 5, 7, 11):
        for r in (1, 2, 3):
            h = teichmuller(2, p, r)
            assert pow(h, p - 1, p ** r) == 1 and h % p == 2 % p


def test_context_mismatch_rejected():
    G = cyclic_group(6)
    ctx = make_context(5, 3)
    x = G.elem(1)
    with pytest.raises(PreconditionError):
        angle_bracket(x, x, ctx)
    with pytest.raises(UsageError):
        tame_relation_holds(x, cyclic_group(6).elem(1), 3)


def _elem_words(G, p, s, t, x0, x1, ctx):
    E = G.elem
    ang = angle_bracket(E(x0), E(t), ctx).index
    rho = RhoWord(E(s), E(t), 1, 2)
    cur = curly_bracket(E(x1), rho, ctx).index
    yy = y1(E(x1), E(s), E(t), ctx).index
    ok = wild_relation_holds(E(s), E(t), E(x0), E(x1), ctx)
    return ang, cur, yy, ok


CASES = [(symmetric_group(3), 3), (heisenberg_group(3), 3), (symmetric_group(4), 3),
         (cyclic_group(50), 5), (symmetric_group(4), 7)]


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda m: m.BACKEND)
@pytest.mark.parametrize("G,p", CASES, ids=lambda v: getattr(v, "name", str(v)))
def test_kernels_agree_with_elem_evaluators(backend, G, p):
    ctx = make_context(G.order, p)
    kc = ctx.kernel_ctx()
    h = kernels.prepared(G, backend)
    rng = np.random.default_rng(G.order * 31 + p)
    for _ in range(60):
        s, t, x0, x1 = (int(v) for v in rng.integers(0, G.order, 4))
        ang, cur, yy, ok = _elem_words(G, p, s, t, x0, x1, ctx)
        assert backend.angle(h, kc, x0, t) == ang
        assert backend.curly(h, kc, x1, G.mul(s, G.pow(t, 2)), 2) == cur
        assert backend.y1(h, kc, x1, s, t) == yy
        assert bool(backend.wild_holds(h, kc, s, t, x0, x1)) == ok


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda m: m.BACKEND)
def test_lift_search_matches_naive(backend):
    G, p = heisenberg_group(3), 3
    ctx = make_context(G.order, p)
    kc = ctx.kernel_ctx()
    h = kernels.prepared(G, backend)
    V = p_core(G, p).elements.tolist()
    ts = [x for x in range(G.order) if G.element_order(x) % p]
    ss = list(range(G.order))
    got = backend.lift_search(h, kc, V[:9], V, ts, ss)
    want = [(s, t, x0, x1) for x1 in V[:9] for x0 in V for t in ts for s in ss
            if G.conj(t, s) == G.pow(t, p) and _pykernels.wild_holds(kernels.prepared(G, _pykernels), kc, s, t, x0, x1)]
    assert sorted(map(tuple, got)) == sorted(want)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda m: m.BACKEND)
def test_closure_and_extend_map(backend):
    G = symmetric_group(4)
    h = kernels.prepared(G, backend)
    for gens in ([1], [1, 2], list(G.gens), []):
        assert sorted(backend.closure(h, gens)) == sorted(_closure(G, gens))
    # extending the identity on generators gives the identity map
    img = backend.extend_map(h, h, list(G.gens), list(G.gens), True)
    assert list(img) == list(range(G.order))


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert _ckernels.BACKEND == "cython"
    assert _pykernels.BACKEND == "python"


def test_pure_flag_forces_python_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, PIGP_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from pigp import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
