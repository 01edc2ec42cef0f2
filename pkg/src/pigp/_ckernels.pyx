# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"


cdef class Prepared:
    cdef public int n
    cdef const int[:, ::1] tab
    cdef const int[::1] inv
    cdef const int[::1] orders
    cdef object _keep

    def __init__(self, table, inv, orders):
        t = np.ascontiguousarray(table, dtype=np.int32)
        i = np.ascontiguousarray(inv, dtype=np.int32)
        o = np.ascontiguousarray(orders, dtype=np.int32)
        self._keep = (t, i, o)
        self.tab = t
        self.inv = i
        self.orders = o
        self.n = t.shape[0]


def prepare(table, inv, orders):
    return Prepared(table, inv, orders)


def closure(Prepared h, gens):
    cdef int n = h.n
    cdef const int[:, ::1] tab = h.tab
    cdef list gl = [z for z in gens if z]
    cdef int ng = len(gl)
    cdef int k, x, y, head = 0, tail = 1
    cdef cnp.ndarray[cnp.int32_t, ndim=1] out = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen = np.zeros(n, dtype=np.uint8)
    cdef int *g = <int *>malloc(max(ng, 1) * sizeof(int))
    for k in range(ng):
        g[k] = gl[k]
    out[0] = 0
    seen[0] = 1
    while head < tail:
        x = out[head]
        head += 1
        for k in range(ng):
            y = tab[x, g[k]]
            if not seen[y]:
                seen[y] = 1
                out[tail] = y
                tail += 1
    free(g)
    res = out[:tail]
    res.sort()
    return res.tolist()


def closure_size(Prepared h, gens):
    return len(closure(h, gens))


def extend_map(Prepared hg, Prepared hh, gens, imgs, bint injective):
    cdef int n = hg.n
    cdef const int[:, ::1] tg = hg.tab
    cdef const int[:, ::1] th = hh.tab
    cdef int ng = len(gens)
    cdef int i, k, x, y, w, cur, head = 0, tail = 1
    cdef cnp.ndarray[cnp.int32_t, ndim=1] img = np.full(n, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] queue = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] used = np.zeros(hh.n, dtype=np.uint8)
    cdef int *g = <int *>malloc(max(ng, 1) * sizeof(int))
    cdef int *v = <int *>malloc(max(ng, 1) * sizeof(int))
    for k in range(ng):
        g[k] = gens[k]
        v[k] = imgs[k]
    img[0] = 0
    used[0] = 1
    queue[0] = 0
    ok = True
    while head < tail and ok:
        x = queue[head]
        head += 1
        for k in range(ng):
            y = tg[x, g[k]]
            w = th[img[x], v[k]]
            cur = img[y]
            if cur < 0:
                if injective:
                    if used[w]:
                        ok = False
                        break
                    used[w] = 1
                img[y] = w
                queue[tail] = y
                tail += 1
            elif cur != w:
                ok = False
                break
    free(g)
    free(v)
    if not ok:
        return None
    return img.tolist()


# -- relation words ---------------------------------------------------------

cdef struct Ctx:
    int p
    long long a
    long long b
    long long *hp


cdef inline int _pow(const int[:, ::1] tab, const int[::1] orders, int x, long long k) nogil:
    cdef long long o = orders[x]
    cdef int r = 0, b = x
    k %= o
    if k < 0:
        k += o
    while k:
        if k & 1:
            r = tab[r, b]
        k >>= 1
        if k:
            b = tab[b, b]
    return r


cdef inline int _conj(const int[:, ::1] tab, const int[::1] inv, int x, int g) nogil:
    return tab[tab[inv[g], x], g]


cdef inline int _comm(const int[:, ::1] tab, const int[::1] inv, int x, int y) nogil:
    return tab[tab[inv[x], inv[y]], tab[x, y]]


cdef int _angle(const int[:, ::1] tab, const int[::1] orders, Ctx *c, int x, int y) nogil:
    cdef int k, w = 0
    for k in range(c.p - 1, 0, -1):
        w = tab[tab[w, _pow(tab, orders, x, c.hp[k])], y]
    return _pow(tab, orders, w, c.a)


cdef int _curly(const int[:, ::1] tab, const int[::1] orders, Ctx *c, int x, int rho, long long j) nogil:
    cdef int k, w = 0
    cdef int rr = tab[rho, rho]
    cdef long long e
    for k in range(c.p - 1):
        e = c.hp[(k * j) % (c.p - 1)]
        w = tab[tab[w, _pow(tab, orders, x, e)], rr]
    return _pow(tab, orders, w, c.a)


cdef int _y1(const int[:, ::1] tab, const int[::1] inv, const int[::1] orders, Ctx *c,
             int x1, int s, int t) nogil:
    cdef int p = c.p
    cdef long long b = c.b
    cdef int t2 = _pow(tab, orders, t, b)
    cdef int s2 = _pow(tab, orders, s, b)
    cdef int rho1 = _pow(tab, orders, t2, p + 1)
    cdef int rho2 = tab[s2, _pow(tab, orders, t2, (p - 1) // 2)]
    cdef int g4 = _pow(tab, orders, t2, (p + 1) // 2)
    cdef int g3 = tab[s2, g4]
    cdef int c1 = _curly(tab, orders, c, x1, rho1, b * (p + 1))
    cdef int c2 = _curly(tab, orders, c, c1, rho2, b * (p - 1) // 2)
    cdef int y = tab[_conj(tab, inv, x1, rho1), _conj(tab, inv, c1, rho2)]
    y = tab[y, _conj(tab, inv, c2, g3)]
    return tab[y, _conj(tab, inv, c2, g4)]


cdef Ctx _make_ctx(ctx, long long *hp):
    cdef Ctx c
    p, a, b, hps = ctx
    c.p = p
    c.a = a
    c.b = b
    for k in range(p):
        hp[k] = hps[k]
    c.hp = hp
    return c


def power(Prepared h, int x, long long k):
    return _pow(h.tab, h.orders, x, k)


def angle(Prepared h, ctx, int x, int y):
    cdef long long *hp = <long long *>malloc(ctx[0] * sizeof(long long))
    cdef Ctx c = _make_ctx(ctx, hp)
    r = _angle(h.tab, h.orders, &c, x, y)
    free(hp)
    return r


def curly(Prepared h, ctx, int x, int rho, long long j):
    cdef long long *hp = <long long *>malloc(ctx[0] * sizeof(long long))
    cdef Ctx c = _make_ctx(ctx, hp)
    r = _curly(h.tab, h.orders, &c, x, rho, j)
    free(hp)
    return r


def y1(Prepared h, ctx, int x1, int s, int t):
    cdef long long *hp = <long long *>malloc(ctx[0] * sizeof(long long))
    cdef Ctx c = _make_ctx(ctx, hp)
    r = _y1(h.tab, h.inv, h.orders, &c, x1, s, t)
    free(hp)
    return r


def wild_holds(Prepared h, ctx, int s, int t, int x0, int x1):
    cdef long long *hp = <long long *>malloc(ctx[0] * sizeof(long long))
    cdef Ctx c = _make_ctx(ctx, hp)
    cdef const int[:, ::1] tab = h.tab
    cdef int lhs = _conj(tab, h.inv, x0, s)
    cdef int cm = _comm(tab, h.inv, x1, _y1(tab, h.inv, h.orders, &c, x1, s, t))
    cdef int rhs = tab[tab[_angle(tab, h.orders, &c, x0, t), _pow(tab, h.orders, x1, c.p)], cm]
    free(hp)
    return lhs == rhs


def lift_search(Prepared h, ctx, xs1, xs0, ts, ss):
    cdef const int[:, ::1] tab = h.tab
    cdef const int[::1] inv = h.inv
    cdef const int[::1] orders = h.orders
    cdef long long *hp = <long long *>malloc(ctx[0] * sizeof(long long))
    cdef Ctx c = _make_ctx(ctx, hp)
    cdef int n1 = len(xs1), n0 = len(xs0), nt = len(ts), ns = len(ss)
    cdef int i, j, k, m, x0, x1, t, s, tp, x1p, ang, npairs = 0
    cdef int *a1 = <int *>malloc(max(n1, 1) * sizeof(int))
    cdef int *a0 = <int *>malloc(max(n0, 1) * sizeof(int))
    cdef int *at = <int *>malloc(max(nt, 1) * sizeof(int))
    cdef int *as_ = <int *>malloc(max(ns, 1) * sizeof(int))
    # tame pairs grouped by t, in (t, s) order
    cdef int *ps = <int *>malloc(max(nt * ns, 1) * sizeof(int))
    cdef int *pt = <int *>malloc(max(nt * ns, 1) * sizeof(int))
    cdef int *tail = <int *>malloc(max(nt * ns, 1) * sizeof(int))
    for i in range(n1):
        a1[i] = xs1[i]
    for i in range(n0):
        a0[i] = xs0[i]
    for i in range(nt):
        at[i] = ts[i]
    for i in range(ns):
        as_[i] = ss[i]
    for i in range(nt):
        t = at[i]
        tp = _pow(tab, orders, t, c.p)
        for j in range(ns):
            s = as_[j]
            if _conj(tab, inv, t, s) == tp:
                ps[npairs] = s
                pt[npairs] = t
                npairs += 1
    out = []
    if npairs:
        for i in range(n1):
            x1 = a1[i]
            x1p = _pow(tab, orders, x1, c.p)
            for m in range(npairs):
                tail[m] = tab[x1p, _comm(tab, inv, x1, _y1(tab, inv, orders, &c, x1, ps[m], pt[m]))]
            for j in range(n0):
                x0 = a0[j]
                m = 0
                while m < npairs:
                    t = pt[m]
                    ang = _angle(tab, orders, &c, x0, t)
                    while m < npairs and pt[m] == t:
                        s = ps[m]
                        if _conj(tab, inv, x0, s) == tab[ang, tail[m]]:
                            out.append((s, t, x0, x1))
                        m += 1
    free(a1); free(a0); free(at); free(as_)
    free(ps); free(pt); free(tail); free(hp)
    return out


def xc_violation(Prepared h, ctx, pairs, vs, wmask):
    cdef const int[:, ::1] tab = h.tab
    cdef const int[::1] inv = h.inv
    cdef const int[::1] orders = h.orders
    cdef long long *hp = <long long *>malloc(ctx[0] * sizeof(long long))
    cdef Ctx c = _make_ctx(ctx, hp)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] wm = np.asarray(wmask, dtype=np.uint8)
    cdef int s, t, x0, z
    found = None
    for s, t in pairs:
        for x0 in vs:
            if wm[x0]:
                continue
            z = tab[_conj(tab, inv, x0, s), inv[_angle(tab, orders, &c, x0, t)]]
            if wm[z]:
                found = (s, t, x0)
                break
        if found is not None:
            break
    free(hp)
    return found
