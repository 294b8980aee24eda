"""Positive definite integral binary quadratic forms.

Two reduction conventions live side by side.  ``SL2`` reduction
(``|b| <= a <= c``, with ``b >= 0`` on the boundary) keeps a class and its
opposite apart and is what the class group uses.  ``GL2`` reduction
(``0 <= b <= a <= c``) identifies them; it is the normal form for questions
about which integers a form represents.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import NamedTuple

from .arith import NotFundamental, is_fundamental, is_prime

__all__ = [
    "SL2",
    "GL2",
    "QuadForm",
    "ClassGroup",
    "NotPositiveDefinite",
    "NotPrimitive",
    "NotRepresented",
    "DiscriminantMismatch",
    "NotNegative",
    "discriminant",
    "transform",
    "reduce_sl2",
    "reduce_gl2",
    "equivalent",
    "successive_minima",
    "represents",
    "represented_values",
    "smallest_represented_prime",
    "prime_form",
    "principal_form",
    "opposite",
    "compose",
    "reduced_forms",
    "class_group",
    "three_rank",
]

SL2 = "SL2"
GL2 = "GL2"


class NotPositiveDefinite(ValueError):
    pass


class NotPrimitive(ValueError):
    pass


class NotRepresented(ValueError):
    pass


class DiscriminantMismatch(ValueError):
    pass


class NotNegative(ValueError):
    pass


class QuadForm(NamedTuple):
    """The form ``a*x**2 + b*x*y + c*y**2``."""

    a: int
    b: int
    c: int

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_positive_definite(self):
        return self.disc < 0 and self.a > 0

    @property
    def is_primitive(self):
        return gcd(self.a, self.b, self.c) == 1

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def discriminant(Q):
    a, b, c = Q
    return b * b - 4 * a * c


def _check_definite(Q):
    Q = QuadForm(*Q)
    if not Q.is_positive_definite:
        raise NotPositiveDefinite(f"{Q} is not positive definite")
    return Q


def transform(Q, U):
    """Return ``Q o U``, i.e. the form ``(x, y) -> Q(p*x + q*y, r*x + s*y)`` for ``U = ((p, q), (r, s))``."""
    a, b, c = Q
    (p, q), (r, s) = U
    return QuadForm(
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def _matmul(U, V):
    (a, b), (c, d) = U
    (e, f), (g, h) = V
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


_IDENTITY = ((1, 0), (0, 1))


def reduce_sl2(Q):
    """Reduce a positive definite form under SL2(Z).

    Returns ``(R, U)`` with ``det U == 1`` and ``transform(Q, U) == R``.
    """
    a, b, c = _check_definite(Q)
    # U is kept as its four entries; columns are the images of e1, e2
    p, q, r, s = 1, 0, 0, 1
    while True:
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            # shear x -> x + k*y
            b, c = b + 2 * a * k, a * k * k + b * k + c
            q, s = q + k * p, s + k * r
        if a > c or (a == c and b < 0):
            # (x, y) -> (-y, x)
            a, b, c = c, -b, a
            p, q, r, s = q, -p, s, -r
            continue
        break
    return QuadForm(a, b, c), ((p, q), (r, s))


def reduce_gl2(Q):
    """The unique GL2(Z)-equivalent form with ``0 <= b <= a <= c``."""
    (a, b, c), _ = reduce_sl2(Q)
    return QuadForm(a, abs(b), c)


def equivalent(Q1, Q2, convention):
    Q1, Q2 = _check_definite(Q1), _check_definite(Q2)
    if Q1.disc != Q2.disc:
        return False
    if convention == SL2:
        return reduce_sl2(Q1)[0] == reduce_sl2(Q2)[0]
    if convention == GL2:
        return reduce_gl2(Q1) == reduce_gl2(Q2)
    raise ValueError(f"unknown convention {convention!r}")


def successive_minima(Q):
    """``(a, c, a - b + c)`` for the GL2-reduced form ``(a, b, c)``."""
    a, b, c = reduce_gl2(Q)
    return a, c, a - b + c


def represents(Q, n):
    """Number of ``(x, y)`` in Z**2 with ``Q(x, y) == n``.

    For each admissible ``y`` the quadratic in ``x`` is solved exactly, so a
    single call costs ``O(sqrt(n))``.
    """
    a, b, c = Q = _check_definite(Q)
    if n < 0:
        return 0
    if n == 0:
        return 1
    D = -Q.disc
    # 4a*Q(x, y) = (2ax + by)**2 + D*y**2
    ymax = isqrt(4 * a * n // D)
    count = 0
    for y in range(-ymax, ymax + 1):
        rest = 4 * a * n - D * y * y
        if rest < 0:
            continue
        t = isqrt(rest)
        if t * t != rest:
            continue
        for u in {t, -t}:
            num = u - b * y
            if num % (2 * a) == 0:
                count += 1
    return count


def represented_values(Q, N):
    """Yield ``Q(x, y)`` for every lattice point with ``Q(x, y) <= N``, origin included."""
    a, b, c = Q = _check_definite(Q)
    D = -Q.disc
    ymax = isqrt(4 * a * N // D)
    for y in range(-ymax, ymax + 1):
        rest = 4 * a * N - D * y * y
        if rest < 0:
            continue
        t = isqrt(rest)
        # -t <= 2ax + by <= t
        lo = -((t + b * y) // (2 * a))
        hi = (t - b * y) // (2 * a)
        cy = c * y * y
        for x in range(lo, hi + 1):
            yield a * x * x + b * x * y + cy


def smallest_represented_prime(Q, bound=None):
    """Least prime ``p <= bound`` represented by ``Q``, or ``None``.

    ``bound`` defaults to ``4 * |disc(Q)|``.
    """
    Q = _check_definite(Q)
    if not Q.is_primitive:
        raise NotPrimitive(f"{Q} is not primitive")
    if bound is None:
        bound = 4 * abs(Q.disc)
    R = reduce_gl2(Q)
    limit = min(bound, max(2, 4 * R.a))
    while True:
        values = sorted({v for v in represented_values(R, limit) if v >= 2})
        for v in values:
            if is_prime(v):
                return v
        if limit >= bound:
            return None
        limit = min(bound, 2 * limit)


def _representation(Q, n):
    """A deterministic solution of ``Q(x, y) == n`` (smallest ``|x| + |y|``, then largest)."""
    a, b, c = Q
    D = -Q.disc
    best = None
    ymax = isqrt(4 * a * n // D)
    for y in range(-ymax, ymax + 1):
        rest = 4 * a * n - D * y * y
        if rest < 0:
            continue
        t = isqrt(rest)
        if t * t != rest:
            continue
        for u in (t, -t):
            if (u - b * y) % (2 * a) == 0:
                x = (u - b * y) // (2 * a)
                key = (abs(x) + abs(y), -x, -y)
                if best is None or key < best[0]:
                    best = (key, x, y)
    if best is None:
        raise NotRepresented(f"{n} is not represented by {Q}")
    return best[1], best[2]


def _xgcd(a, b):
    """``(g, u, v)`` with ``u*a + v*b == g == gcd(a, b) >= 0``."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        return -a, -u0, -v0
    return a, u0, v0


def prime_form(Q, p):
    """A GL2-equivalent form ``(p, b, c)`` with ``0 <= b <= p``.

    Moves a representation ``(x0, y0)`` of ``p`` to the first basis vector,
    shears ``b`` into ``[-p, p)`` and finally flips its sign if needed.
    """
    Q = _check_definite(Q)
    if not is_prime(p):
        raise NotRepresented(f"{p} is not prime")
    x0, y0 = _representation(Q, p)
    # x0*r - y0*s == 1
    g, r, t = _xgcd(x0, y0)
    assert g == 1, "a prime is only represented primitively"
    s = -t
    S = ((x0, s), (y0, r))
    P = transform(Q, S)
    assert P.a == p
    # T**n sends b to b + 2pn
    n = -((P.b + p) // (2 * p))
    P = transform(P, ((1, n), (0, 1)))
    if P.b < 0:
        P = transform(P, ((1, 0), (0, -1)))
    assert 0 <= P.b <= p
    return P


def principal_form(D):
    b = D % 2
    return QuadForm(1, b, (b * b - D) // 4)


def opposite(Q):
    a, b, c = Q
    return QuadForm(a, -b, c)


def compose(Q1, Q2):
    """Gauss composition of two primitive forms of the same negative discriminant.

    Dirichlet composition via united forms in the general (non-coprime) case;
    the result is SL2-reduced.
    """
    Q1, Q2 = _check_definite(Q1), _check_definite(Q2)
    D = Q1.disc
    if Q2.disc != D:
        raise DiscriminantMismatch(f"{Q1} and {Q2} have different discriminants")
    if not (Q1.is_primitive and Q2.is_primitive):
        raise NotPrimitive("composition needs primitive forms")
    a1, b1, c1 = Q1
    a2, b2, c2 = Q2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1 = 0
        d = a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = _xgcd(s, d)
        x2, y2 = u, -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    num = b3 * b3 - D
    assert num % (4 * a3) == 0
    return reduce_sl2(QuadForm(a3, b3, num // (4 * a3)))[0]


def reduced_forms(D, primitive=True):
    """All SL2-reduced forms of negative discriminant ``D``, sorted by ``(a, b)``."""
    if D >= 0:
        raise NotNegative(f"{D} is not negative")
    if D % 4 not in (0, 1):
        return []
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        m = 4 * a
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % m:
                continue
            c = num // m
            if c < a or (c == a and b < 0):
                continue
            if primitive and gcd(a, b, c) != 1:
                continue
            out.append(QuadForm(a, b, c))
    return out


@dataclass(frozen=True)
class ClassGroup:
    """Reduced primitive forms of one negative discriminant under composition."""

    discriminant: int
    elements: tuple
    identity_index: int = 0
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {f: i for i, f in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def identity(self):
        return self.elements[self.identity_index]

    def index(self, Q):
        return self._index[reduce_sl2(Q)[0]]

    def mul(self, i, j):
        return self._index[compose(self.elements[i], self.elements[j])]

    def inverse(self, i):
        return self._index[reduce_sl2(opposite(self.elements[i]))[0]]

    def table(self):
        n = len(self.elements)
        return [[self.mul(i, j) for j in range(n)] for i in range(n)]


def class_group(D, elements=None):
    """The form class group of the negative fundamental discriminant ``D``.

    ``elements`` may supply a previously computed list of reduced forms
    (e.g. from a cache); it is checked for shape but not recomputed.
    """
    if D >= 0:
        raise NotNegative(f"{D} is not negative")
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    if elements is None:
        elements = reduced_forms(D)
    elements = tuple(QuadForm(*f) for f in elements)
    if not elements or elements[0] != principal_form(D):
        raise ValueError(f"class group of {D} must start with the principal form")
    return ClassGroup(D, elements, 0)


def three_rank(G):
    """Dimension over F_3 of the 3-torsion of ``G``."""
    e = G.identity_index
    count = 0
    for i in range(len(G)):
        if G.mul(G.mul(i, i), i) == e:
            count += 1
    r = 0
    while count % 3 == 0:
        count //= 3
        r += 1
    if count != 1:
        raise ArithmeticError(f"3-torsion of Cl({G.discriminant}) has non 3-power order")
    return r
