"""Binary cubic forms, the cubic rings they parametrize, and trace-zero forms.

A GL2(Z)-class of irreducible integral binary cubic forms of fundamental
discriminant ``d`` is the same thing as an isomorphism class of cubic fields
of discriminant ``d`` (the ring attached to the form is then maximal).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, isqrt
from typing import NamedTuple

from .arith import NotFundamental, integer_kernel, is_fundamental, three_reflection
from .qform import QuadForm, reduce_sl2, transform

__all__ = [
    "CubicForm",
    "CubicRing",
    "TraceZeroLattice",
    "Reducible",
    "NonFundamentalDiscriminant",
    "IntegralityViolation",
    "NotPositive",
    "cubic_discriminant",
    "is_irreducible",
    "transform_cubic",
    "hessian",
    "canonical_form",
    "enumeration_box",
    "enumerate_cubic_fields",
    "ring_of",
    "trace_zero",
    "trace_form",
]


class Reducible(ValueError):
    pass


class NonFundamentalDiscriminant(ValueError):
    pass


class IntegralityViolation(ArithmeticError):
    pass


class NotPositive(ValueError):
    pass


class CubicForm(NamedTuple):
    """The form ``a*x**3 + b*x**2*y + c*x*y**2 + d*y**3``."""

    a: int
    b: int
    c: int
    d: int

    def __call__(self, x, y):
        return ((self.a * x + self.b * y) * x + self.c * y * y) * x + self.d * y ** 3

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c}, {self.d})"


def cubic_discriminant(F):
    a, b, c, d = F
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d


def _divisors(n):
    n = abs(n)
    small = [k for k in range(1, isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def is_irreducible(F):
    """True iff ``a != 0`` and ``a t^3 + b t^2 + c t + d`` has no rational root."""
    a, b, c, d = F
    if a == 0 or d == 0:
        return False
    for p in _divisors(d):
        for q in _divisors(a):
            if gcd(p, q) != 1:
                continue
            for sp in (p, -p):
                # q^3 * f(p/q)
                if a * sp ** 3 + b * sp * sp * q + c * sp * q * q + d * q ** 3 == 0:
                    return False
    return True


def transform_cubic(F, U):
    """``F o U``: the form ``(x, y) -> F(p*x + q*y, r*x + s*y)``."""
    a, b, c, d = F
    (p, q), (r, s) = U
    # expand each monomial X^i Y^(3-i) with X = p x + q y, Y = r x + s y
    X = (p, q)
    Y = (r, s)

    def mul(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            for j, y in enumerate(v):
                out[i + j] += x * y
        return out

    X2, Y2 = mul(X, X), mul(Y, Y)
    terms = (mul(X2, X), mul(X2, Y), mul(X, Y2), mul(Y2, Y))
    coeffs = [0, 0, 0, 0]
    for k, t in zip((a, b, c, d), terms):
        for i in range(4):
            coeffs[i] += k * t[i]
    return CubicForm(*coeffs)


def hessian(F):
    """The quadratic covariant ``(b^2 - 3ac, bc - 9ad, c^2 - 3bd)``; discriminant ``-3 disc(F)``."""
    a, b, c, d = F
    return QuadForm(b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)


def _points(Q, n):
    a, b, c = Q
    D = 4 * a * c - b * b
    ymax = isqrt(4 * a * n // D)
    out = []
    for y in range(-ymax, ymax + 1):
        rest = 4 * a * n - D * y * y
        if rest < 0:
            continue
        t = isqrt(rest)
        if t * t != rest:
            continue
        for u in {t, -t}:
            if (u - b * y) % (2 * a) == 0:
                out.append(((u - b * y) // (2 * a), y))
    return out


def _gl2_automorphisms(Q):
    """All ``U`` in GL2(Z) with ``transform(Q, U) == Q`` for a reduced definite ``Q``."""
    a, _, c = Q
    autos = []
    for (p, r) in _points(Q, a):
        for (q, s) in _points(Q, c):
            if abs(p * s - q * r) == 1 and transform(Q, ((p, q), (r, s))) == Q:
                autos.append(((p, q), (r, s)))
    return autos


def canonical_form(F):
    """A canonical representative of the GL2(Z)-class of ``F`` (positive discriminant only).

    The Hessian is positive definite; it is reduced (``0 <= Q <= P <= R``)
    and the remaining freedom, its finite automorphism group together with
    ``F -> -F``, is resolved by taking the lexicographic maximum (so ``a > 0``).
    """
    if cubic_discriminant(F) <= 0:
        raise NotPositive("canonical_form needs a positive discriminant")
    Hr, U = reduce_sl2(hessian(F))
    if Hr.b < 0:
        U = ((U[0][0], -U[0][1]), (U[1][0], -U[1][1]))
    F0 = transform_cubic(F, U)
    H0 = hessian(F0)
    assert H0.b >= 0 and H0 == QuadForm(Hr.a, abs(Hr.b), Hr.c)
    best = None
    for A in _gl2_automorphisms(H0):
        G = transform_cubic(F0, A)
        for cand in (G, CubicForm(*(-x for x in G))):
            if best is None or cand > best:
                best = cand
    return best


def enumeration_box(d):
    """Yield every ``(a, b, c, e)`` with discriminant ``d`` in a box meeting every GL2-class.

    Each class of positive discriminant ``d`` has a representative whose
    Hessian takes its minimum at ``(1, 0)``; then ``0 < P = b^2 - 3ac <= sqrt(d)``.
    Writing ``P`` through the roots gives ``P >= 3/2 a^(2/3) d^(1/3)``, hence
    ``729 a^4 <= 64 d``.  Translations ``x -> x + t y`` keep ``a`` and ``P``
    and move ``b`` by ``3at``, so ``0 <= b < 3a``; ``a > 0`` by ``F -> -F``.
    The last coefficient solves the (quadratic) discriminant equation.
    """
    s = isqrt(d)
    a = 1
    while 729 * a ** 4 <= 64 * d:
        for b in range(3 * a):
            # 1 <= b^2 - 3ac <= s
            cmin = -((s - b * b) // (3 * a))
            cmax = (b * b - 1) // (3 * a)
            for c in range(cmin, cmax + 1):
                # 27a^2 e^2 - (18abc - 4b^3) e + (d - b^2c^2 + 4ac^3) = 0
                A = 27 * a * a
                B = -(18 * a * b * c - 4 * b ** 3)
                C = d - b * b * c * c + 4 * a * c ** 3
                disc = B * B - 4 * A * C
                if disc < 0:
                    continue
                r = isqrt(disc)
                if r * r != disc:
                    continue
                for num in {-B + r, -B - r}:
                    if num % (2 * A) == 0:
                        yield CubicForm(a, b, c, num // (2 * A))
        a += 1


def enumerate_cubic_fields(d):
    """One canonical cubic form per isomorphism class of cubic fields of discriminant ``d > 0``."""
    if d <= 0:
        raise NotPositive(f"{d} is not positive")
    if not is_fundamental(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    found = set()
    for F in enumeration_box(d):
        if is_irreducible(F):
            found.add(canonical_form(F))
    return sorted(found)


def _add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def _scale(k, u):
    return tuple(k * x for x in u)


@dataclass(frozen=True)
class CubicRing:
    """Rank-3 ring with basis ``(1, w, t)`` attached to a binary cubic form.

    ``w^2 = -ac - b w + a t``, ``w t = -ad``, ``t^2 = -bd - d w + c t``.
    Elements are coordinate triples.
    """

    form: CubicForm
    table: tuple  # table[i][j] = e_i * e_j

    @classmethod
    def from_form(cls, F):
        a, b, c, d = F
        one, w, t = (1, 0, 0), (0, 1, 0), (0, 0, 1)
        ww = (-a * c, -b, a)
        wt = (-a * d, 0, 0)
        tt = (-b * d, -d, c)
        table = ((one, w, t), (w, ww, wt), (t, wt, tt))
        return cls(CubicForm(*F), table)

    def mul(self, u, v):
        out = (0, 0, 0)
        for i in range(3):
            if u[i] == 0:
                continue
            for j in range(3):
                if v[j]:
                    out = _add(out, _scale(u[i] * v[j], self.table[i][j]))
        return out

    @property
    def trace_vector(self):
        _, b, c, _ = self.form
        return (3, -b, c)

    def trace(self, u):
        return sum(x * y for x, y in zip(self.trace_vector, u))

    def basis(self):
        return ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def is_associative(self):
        E = self.basis()
        for x, y, z in product(E, repeat=3):
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                return False
        return all(self.mul(x, y) == self.mul(y, x) for x, y in product(E, repeat=2))

    def trace_gram(self):
        E = self.basis()
        return [[self.trace(self.mul(x, y)) for y in E] for x in E]

    def discriminant(self):
        return _det3(self.trace_gram())


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def ring_of(F):
    """The cubic ring of an irreducible form of fundamental discriminant, with invariants checked."""
    F = CubicForm(*F)
    if not is_irreducible(F):
        raise Reducible(f"{F} is reducible")
    D = cubic_discriminant(F)
    if not is_fundamental(D):
        raise NonFundamentalDiscriminant(f"discriminant {D} of {F} is not fundamental")
    R = CubicRing.from_form(F)
    if not R.is_associative():
        raise ArithmeticError(f"ring of {F} is not associative")
    if R.discriminant() != D:
        raise ArithmeticError(f"trace discriminant of {F} differs from {D}")
    return R


@dataclass(frozen=True)
class TraceZeroLattice:
    basis: tuple  # two coordinate triples
    gram: tuple  # ((G11, G12), (G12, G22)), G_ij = tr(v_i v_j)

    def minors_gcd(self):
        (u, v) = self.basis
        m = (u[0] * v[1] - u[1] * v[0], u[0] * v[2] - u[2] * v[0], u[1] * v[2] - u[2] * v[1])
        return gcd(*m)


def trace_zero(R):
    """The rank-2 lattice of trace-zero elements of ``R`` with its trace Gram matrix."""
    kernel = integer_kernel(list(R.trace_vector))
    assert len(kernel) == 2
    v1, v2 = (tuple(v) for v in kernel)
    g11 = R.trace(R.mul(v1, v1))
    g12 = R.trace(R.mul(v1, v2))
    g22 = R.trace(R.mul(v2, v2))
    return TraceZeroLattice((v1, v2), ((g11, g12), (g12, g22)))


def trace_form(R, d, lattice=None):
    """The rescaled trace-zero form ``x -> tr(x^2) / (2 gcd(3, d))`` as a binary form.

    For fundamental ``d`` the result is integral and primitive with
    discriminant ``-3d / gcd(3, d)^2``.
    """
    if not is_fundamental(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    L = lattice if lattice is not None else trace_zero(R)
    (g11, g12), (_, g22) = L.gram
    g = gcd(3, d)
    if g11 % (2 * g) or g12 % g or g22 % (2 * g):
        raise IntegralityViolation(f"trace form {L.gram} is not divisible by {2 * g}")
    t = QuadForm(g11 // (2 * g), g12 // g, g22 // (2 * g))
    if t.disc != three_reflection(d):
        raise IntegralityViolation(f"trace form {t} has discriminant {t.disc}, expected {three_reflection(d)}")
    return t
