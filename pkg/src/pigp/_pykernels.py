"""Pure-Python kernels.

This module mirrors ``_ckernels.pyx`` function for function and is used when
the compiled extension is unavailable (or when ``PIGP_PURE=1``).  All
functions work on a *prepared* group, i.e. the multiplication table, inverse
map and element orders of a :class:`pigp.group.Group` converted once to
Python lists.

Relation words take a context tuple ``(p, a, b, hp)`` where ``hp[k]`` is
``h**k mod p**r`` for ``0 <= k < p``.
"""

BACKEND = "python"


class Prepared:
    __slots__ = ("n", "rows", "inv", "orders")

    def __init__(self, table, inv, orders):
        self.n = len(inv)
        self.rows = table.tolist()
        self.inv = inv.tolist()
        self.orders = orders.tolist()


def prepare(table, inv, orders):
    return Prepared(table, inv, orders)


def closure(h, gens):
    """Sorted element list of the subgroup generated by ``gens``."""
    rows = h.rows
    gens = [g for g in gens if g]
    seen = bytearray(h.n)
    seen[0] = 1
    out = [0]
    i = 0
    while i < len(out):
        row = rows[out[i]]
        for g in gens:
            y = row[g]
            if not seen[y]:
                seen[y] = 1
                out.append(y)
        i += 1
    out.sort()
    return out


def closure_size(h, gens):
    return len(closure(h, gens))


def extend_map(hg, hh, gens, imgs, injective):
    """Extend ``gens[i] -> imgs[i]`` multiplicatively.

    Returns the image list (``-1`` outside the generated subgroup) or ``None``
    when the assignment is inconsistent (or not injective, if requested).
    """
    rg = hg.rows
    rh = hh.rows
    img = [-1] * hg.n
    img[0] = 0
    used = bytearray(hh.n) if injective else None
    if injective:
        used[0] = 1
    pairs = [(g, v) for g, v in zip(gens, imgs)]
    queue = [0]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        rowx = rg[x]
        rowi = rh[img[x]]
        for g, v in pairs:
            y = rowx[g]
            w = rowi[v]
            cur = img[y]
            if cur < 0:
                if injective:
                    if used[w]:
                        return None
                    used[w] = 1
                img[y] = w
                queue.append(y)
            elif cur != w:
                return None
    return img


# -- relation words ---------------------------------------------------------

def _pow(rows, orders, x, k):
    k %= orders[x]
    r = 0
    b = x
    while k:
        if k & 1:
            r = rows[r][b]
        k >>= 1
        if k:
            b = rows[b][b]
    return r


def power(h, x, k):
    return _pow(h.rows, h.orders, x, k)


def _angle(rows, orders, ctx, x, y):
    p, a, _b, hp = ctx
    w = 0
    for k in range(p - 1, 0, -1):
        w = rows[rows[w][_pow(rows, orders, x, hp[k])]][y]
    return _pow(rows, orders, w, a)


def _curly(rows, orders, ctx, x, rho, j):
    p, a, _b, hp = ctx
    rr = rows[rho][rho]
    w = 0
    for k in range(p - 1):
        e = hp[(k * j) % (p - 1)]
        w = rows[rows[w][_pow(rows, orders, x, e)]][rr]
    return _pow(rows, orders, w, a)


def _conj(rows, inv, x, g):
    return rows[rows[inv[g]][x]][g]


def _y1(rows, inv, orders, ctx, x1, s, t):
    p, _a, b, _hp = ctx
    t2 = _pow(rows, orders, t, b)
    s2 = _pow(rows, orders, s, b)
    rho1 = _pow(rows, orders, t2, p + 1)
    rho2 = rows[s2][_pow(rows, orders, t2, (p - 1) // 2)]
    g4 = _pow(rows, orders, t2, (p + 1) // 2)
    g3 = rows[s2][g4]
    c1 = _curly(rows, orders, ctx, x1, rho1, b * (p + 1))
    c2 = _curly(rows, orders, ctx, c1, rho2, b * (p - 1) // 2)
    y = rows[_conj(rows, inv, x1, rho1)][_conj(rows, inv, c1, rho2)]
    y = rows[y][_conj(rows, inv, c2, g3)]
    return rows[y][_conj(rows, inv, c2, g4)]


def _comm(rows, inv, x, y):
    return rows[rows[inv[x]][inv[y]]][rows[x][y]]


def angle(h, ctx, x, y):
    return _angle(h.rows, h.orders, ctx, x, y)


def curly(h, ctx, x, rho, j):
    return _curly(h.rows, h.orders, ctx, x, rho, j)


def y1(h, ctx, x1, s, t):
    return _y1(h.rows, h.inv, h.orders, ctx, x1, s, t)


def wild_holds(h, ctx, s, t, x0, x1):
    rows, inv, orders = h.rows, h.inv, h.orders
    p = ctx[0]
    lhs = _conj(rows, inv, x0, s)
    c = _comm(rows, inv, x1, _y1(rows, inv, orders, ctx, x1, s, t))
    rhs = rows[rows[_angle(rows, orders, ctx, x0, t)][_pow(rows, orders, x1, p)]][c]
    return lhs == rhs


def lift_search(h, ctx, xs1, xs0, ts, ss):
    """All (s, t, x0, x1) from the fibres satisfying the tame and wild relations.

    Loop nesting (and therefore output order) is x1, x0, t, s.  ``ts`` must
    already be restricted to elements of order prime to p.
    """
    rows, inv, orders = h.rows, h.inv, h.orders
    p = ctx[0]
    tame = []
    for t in ts:
        tp = _pow(rows, orders, t, p)
        tame.append((t, [s for s in ss if _conj(rows, inv, t, s) == tp]))
    out = []
    for x1 in xs1:
        x1p = _pow(rows, orders, x1, p)
        tails = {}
        for t, good in tame:
            for s in good:
                c = _comm(rows, inv, x1, _y1(rows, inv, orders, ctx, x1, s, t))
                tails[(s, t)] = rows[x1p][c]
        for x0 in xs0:
            for t, good in tame:
                if not good:
                    continue
                ang = _angle(rows, orders, ctx, x0, t)
                for s in good:
                    if _conj(rows, inv, x0, s) == rows[ang][tails[(s, t)]]:
                        out.append((s, t, x0, x1))
    return out


def xc_violation(h, ctx, pairs, vs, wmask):
    """First (s, t, x0) with x0^s <x0,t>^-1 in W but x0 not in W, else None."""
    rows, inv, orders = h.rows, h.inv, h.orders
    for s, t in pairs:
        for x0 in vs:
            if wmask[x0]:
                continue
            z = rows[_conj(rows, inv, x0, s)][inv[_angle(rows, orders, ctx, x0, t)]]
            if wmask[z]:
                return (s, t, x0)
    return None
