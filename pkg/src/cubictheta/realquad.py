"""Indefinite binary quadratic forms, only as far as the 3-rank of a real quadratic field.

Cubic fields of discriminant ``D > 0`` are counted by the 3-rank of the
class group of Q(sqrt(D)).  The narrow and wide class groups differ by a
factor of at most 2, so the 3-rank of the SL2-form class group of
discriminant ``D`` (the narrow class group) is the right quantity.

SL2-classes of indefinite forms are cycles of reduced forms under the
``rho`` operator.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

from .arith import NotFundamental, is_fundamental
from .qform import QuadForm

__all__ = [
    "is_reduced_indefinite",
    "rho",
    "reduce_indefinite",
    "compose_forms",
    "reduced_indefinite_forms",
    "NarrowClassGroup",
    "narrow_class_group",
    "real_three_rank",
]


def _check(D):
    if D <= 0:
        raise ValueError(f"{D} is not positive")
    s = isqrt(D)
    if s * s == D:
        raise ValueError(f"{D} is a square")
    return s


def is_reduced_indefinite(Q):
    """``0 < b < sqrt(D)`` and ``sqrt(D) - b < 2|a| < sqrt(D) + b``."""
    a, b, c = Q
    D = b * b - 4 * a * c
    s = isqrt(D)
    A = abs(a)
    return 0 < b <= s and 2 * A + b > s and 2 * A - b <= s


def _normalize_b(b, a, D, s):
    A = abs(a)
    if A * A > D:
        # -|a| < b <= |a|
        return A - (A - b) % (2 * A)
    # sqrt(D) - 2|a| < b < sqrt(D)
    return s - (s - b) % (2 * A)


def rho(Q):
    a, b, c = Q
    D = b * b - 4 * a * c
    s = isqrt(D)
    b1 = _normalize_b(-b, c, D, s)
    return QuadForm(c, b1, (b1 * b1 - D) // (4 * c))


def reduce_indefinite(Q):
    a, b, c = Q
    D = b * b - 4 * a * c
    s = _check(D)
    b = _normalize_b(b, a, D, s)
    Q = QuadForm(a, b, (b * b - D) // (4 * a))
    while not is_reduced_indefinite(Q):
        Q = rho(Q)
    return Q


def _xgcd3(x, y, z):
    """``(e, u, v, w)`` with ``u*x + v*y + w*z == e == gcd(x, y, z)``."""

    def xgcd(a, b):
        u0, v0, u1, v1 = 1, 0, 0, 1
        while b:
            q, r = divmod(a, b)
            a, b = b, r
            u0, u1 = u1, u0 - q * u1
            v0, v1 = v1, v0 - q * v1
        return (a, u0, v0) if a >= 0 else (-a, -u0, -v0)

    g, p, q = xgcd(x, y)
    e, s, t = xgcd(g, z)
    return e, s * p, s * q, t


def compose_forms(Q1, Q2):
    """Dirichlet composition of two primitive forms of equal discriminant (any sign), unreduced.

    With ``e = gcd(a1, a2, (b1 + b2)/2) = u a1 + v a2 + w (b1 + b2)/2`` the
    middle coefficient is ``B = (u a1 b2 + v a2 b1 + w (b1 b2 + D)/2) / e``.
    """
    a1, b1, c1 = Q1
    a2, b2, c2 = Q2
    D = b1 * b1 - 4 * a1 * c1
    if b2 * b2 - 4 * a2 * c2 != D:
        raise ValueError("discriminants differ")
    h = (b1 + b2) // 2
    e, u, v, w = _xgcd3(a1, a2, h)
    num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2
    assert num % e == 0
    B = num // e
    A = a1 * a2 // (e * e)
    B %= 2 * A
    C = B * B - D
    assert C % (4 * A) == 0
    return QuadForm(A, B, C // (4 * A))


def reduced_indefinite_forms(D):
    """All primitive reduced forms of positive non-square discriminant ``D``."""
    s = _check(D)
    out = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        N = (b * b - D) // 4  # = a*c < 0
        M = -N
        # s - b < 2|a| <= s + b
        lo = (s - b) // 2 + 1
        hi = (s + b) // 2
        for A in range(max(1, lo), hi + 1):
            if M % A:
                continue
            C = M // A
            for a, c in ((A, -C), (-A, C)):
                if gcd(a, b, c) == 1:
                    out.append(QuadForm(a, b, c))
    return sorted(out)


class NarrowClassGroup:
    """SL2-classes of primitive forms of discriminant ``D > 0`` as rho-cycles."""

    def __init__(self, D):
        _check(D)
        self.discriminant = D
        forms = reduced_indefinite_forms(D)
        self.cycle_of = {}
        self.cycles = []
        for f in forms:
            if f in self.cycle_of:
                continue
            cyc = [f]
            g = rho(f)
            while g != f:
                cyc.append(g)
                g = rho(g)
            k = len(self.cycles)
            for g in cyc:
                self.cycle_of[g] = k
            self.cycles.append(cyc)
        b = D % 2
        self.identity = self.class_of(QuadForm(1, b, (b * b - D) // 4))

    def __len__(self):
        return len(self.cycles)

    def class_of(self, Q):
        return self.cycle_of[reduce_indefinite(Q)]

    def representative(self, k):
        return self.cycles[k][0]

    def mul(self, i, j):
        return self.class_of(compose_forms(self.representative(i), self.representative(j)))


def narrow_class_group(D):
    if not is_fundamental(D) or D <= 1:
        raise NotFundamental(f"{D} is not a positive fundamental discriminant")
    return NarrowClassGroup(D)


@lru_cache(maxsize=4096)
def real_three_rank(D):
    """3-rank of the class group of Q(sqrt(D)) for a positive fundamental ``D``."""
    G = narrow_class_group(D)
    count = 0
    for k in range(len(G)):
        if G.mul(G.mul(k, k), k) == G.identity:
            count += 1
    r = 0
    while count % 3 == 0:
        count //= 3
        r += 1
    if count != 1:
        raise ArithmeticError(f"3-torsion of Cl+({D}) has non 3-power order")
    return r
