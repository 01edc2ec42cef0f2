"""The Q_p specialisation of the Jannsen-Wingberg relations.

The profinite exponents ``pi/(p-1)`` and ``pi_2`` become ordinary integers
``a`` and ``b`` once the group order is known, and the ``(p-1)``-st root of
unity ``h`` becomes an integer modulo ``p**r``.  The functions here evaluate the
bracket words on :class:`~pigp.group.Elem` values step by step; the kernels in
``pigp.kernels`` evaluate the same words on raw indices and are cross-checked
against these in the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import sympy

from .errors import PreconditionError, UsageError
from .group import Elem


def _split(n: int, q: int) -> tuple[int, int, int]:
    """``n = u * q**r`` with ``gcd(u, q) = 1``; returns (u, r, q**r)."""
    r = 0
    while n % q == 0:
        n //= q
        r += 1
    return n, r, q ** r


def least_primitive_root(p: int) -> int:
    return int(sympy.primitive_root(p))


def teichmuller(seed: int, p: int, r: int) -> int:
    """The (p-1)-st root of unity mod p**r congruent to ``seed`` mod p."""
    if r == 0:
        return 1
    mod = p ** r
    x = seed % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y


@dataclass(frozen=True)
class RelationContext:
    p: int
    n: int
    u_p: int
    r: int
    u_2: int
    s: int
    a: int
    b: int
    h: int
    seed: int
    # b reduced modulo lcm(n, p-1): agrees with b mod n and with pi_2 mod p-1,
    # so that beta(tau^b) = h^b is evaluated with the correct exponent.
    b_lift: int
    hp: tuple[int, ...] = field(repr=False)

    @property
    def pr(self) -> int:
        return self.p ** self.r

    def kernel_ctx(self) -> tuple:
        """Tuple ``(p, a, b_lift, hp)`` consumed by the compiled/pure kernels."""
        return (self.p, self.a, self.b_lift, list(self.hp))

    def beta(self, j: int) -> int:
        """beta(sigma^i tau^j) = h^j, reduced mod p^r."""
        return self.hp[j % (self.p - 1)]

    def check(self) -> None:
        p, n, pr = self.p, self.n, self.pr
        assert self.u_p * pr == n and gcd(self.u_p, p) == 1
        assert self.u_2 * 2 ** self.s == n and self.u_2 % 2 == 1
        assert self.a % self.u_p == 0 and ((p - 1) * self.a - 1) % pr == 0
        assert self.b % self.u_2 == 0 and (self.b - 1) % 2 ** self.s == 0
        assert pow(self.h, p - 1, pr) == 1 % pr
        if self.r:
            assert sympy.n_order(self.h % p, p) == p - 1
        assert (self.b_lift - self.b) % n == 0


def _pi2(modulus: int) -> int:
    """Image of pi_2 in Z/modulus: 1 on the 2-part, 0 on the odd part."""
    odd, _, two = _split(modulus, 2)
    return int(sympy.ntheory.modular.crt([odd, two], [0, 1])[0]) % modulus if modulus > 1 else 0


def make_context(n: int, p: int, h_seed: int | None = None) -> RelationContext:
    """Context for groups of order ``n`` at the odd prime ``p``.

    ``h_seed`` selects the primitive root whose Teichmuller lift is ``h``
    (default: the least primitive root mod p).
    """
    if p % 2 == 0 or not sympy.isprime(p):
        raise PreconditionError("p must be an odd prime")
    if n < 1:
        raise PreconditionError("n must be positive")
    u_p, r, pr = _split(n, p)
    u_2, s, two = _split(n, 2)
    if r:
        inv = pow(p - 1, -1, pr)
        a = int(sympy.ntheory.modular.crt([u_p, pr], [0, inv])[0]) % n
    else:
        a = 0
    b = int(sympy.ntheory.modular.crt([u_2, two], [0, 1])[0]) % n if n > 1 else 0
    seed = least_primitive_root(p) if h_seed is None else int(h_seed)
    if seed % p == 0 or sympy.n_order(seed % p, p) != p - 1:
        raise PreconditionError(f"h seed {seed} is not a primitive root mod {p}")
    h = teichmuller(seed, p, r)
    L = sympy.ilcm(n, p - 1)
    b_lift = _pi2(int(L))
    hp = tuple(pow(h, k, pr) for k in range(p))
    ctx = RelationContext(p, n, u_p, r, u_2, s, a, b, h, seed, b_lift, hp)
    ctx.check()
    return ctx


@dataclass(frozen=True)
class RhoWord:
    """rho = sigma^i tau^j with the concrete sigma, tau attached."""

    sigma: Elem
    tau: Elem
    i: int
    j: int

    @property
    def value(self) -> Elem:
        return (self.sigma ** self.i) * (self.tau ** self.j)

    def beta(self, ctx: RelationContext, k: int = 1) -> int:
        """beta(rho^k) = h^(k j) mod p^r."""
        return ctx.beta(k * self.j)


def _check(ctx: RelationContext, *xs: Elem) -> None:
    G = xs[0].group
    for x in xs:
        if x.group is not G:
            raise UsageError("elements of different groups")
    if ctx.n % G.order:
        raise PreconditionError(f"context built for order {ctx.n}, group has order {G.order}")


def angle_bracket(x: Elem, y: Elem, ctx: RelationContext) -> Elem:
    """<x, y> = (x^{h^{p-1}} y x^{h^{p-2}} y ... x^h y)^a."""
    _check(ctx, x, y)
    w = x.group.identity
    for k in range(ctx.p - 1, 0, -1):
        w = w * (x ** ctx.hp[k]) * y
    return w ** ctx.a


def curly_bracket(x: Elem, rho: RhoWord, ctx: RelationContext) -> Elem:
    """{x, rho} = (x rho^2 x^{beta(rho)} rho^2 ... x^{beta(rho^{p-2})} rho^2)^a."""
    _check(ctx, x, rho.sigma, rho.tau)
    r2 = rho.value * rho.value
    w = x.group.identity
    for k in range(ctx.p - 1):
        w = w * (x ** rho.beta(ctx, k)) * r2
    return w ** ctx.a


def y1(x1: Elem, sigma: Elem, tau: Elem, ctx: RelationContext) -> Elem:
    """The element y_1 in the span of x_1, sigma, tau.

    With tau_2 = tau^b, sigma_2 = sigma^b::

        y1 = x1^{tau_2^{p+1}} . c1^{sigma_2 tau_2^{(p-1)/2}}
             . c2^{sigma_2 tau_2^{(p+1)/2}} . c2^{tau_2^{(p+1)/2}}

    where c1 = {x1, tau_2^{p+1}} and c2 = {c1, sigma_2 tau_2^{(p-1)/2}}.
    """
    _check(ctx, x1, sigma, tau)
    p, b = ctx.p, ctx.b_lift
    rho1 = RhoWord(sigma, tau, 0, b * (p + 1))
    rho2 = RhoWord(sigma, tau, b, b * (p - 1) // 2)
    c1 = curly_bracket(x1, rho1, ctx)
    c2 = curly_bracket(c1, rho2, ctx)
    s2 = sigma ** b
    t2 = tau ** b
    g3 = s2 * t2 ** ((p + 1) // 2)
    g4 = t2 ** ((p + 1) // 2)
    return x1.conj(rho1.value) * c1.conj(rho2.value) * c2.conj(g3) * c2.conj(g4)


def tame_relation_holds(sigma: Elem, tau: Elem, p: int) -> bool:
    """tau^sigma == tau^p."""
    if sigma.group is not tau.group:
        raise UsageError("elements of different groups")
    return tau.conj(sigma) == tau ** p


def wild_relation_holds(sigma: Elem, tau: Elem, x0: Elem, x1: Elem, ctx: RelationContext) -> bool:
    """x0^sigma == <x0, tau> x1^p [x1, y1]."""
    _check(ctx, sigma, tau, x0, x1)
    rhs = angle_bracket(x0, tau, ctx) * (x1 ** ctx.p) * x1.comm(y1(x1, sigma, tau, ctx))
    return x0.conj(sigma) == rhs
