"""Theta series of positive definite binary forms as exact coefficient vectors."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .arith import prime_sieve
from .qform import QuadForm, reduce_gl2, represented_values, successive_minima

__all__ = [
    "ThetaSeries",
    "InsufficientPrecision",
    "PrecisionMismatch",
    "IndependenceResult",
    "theta_expand",
    "default_precision",
    "f_K",
    "first_two_nonzero",
    "fingerprint",
    "exact_rank",
    "linearly_independent",
]


class InsufficientPrecision(ValueError):
    pass


class PrecisionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ThetaSeries:
    """Coefficients ``a(0..precision)`` of ``sum q^Q(x)``.

    ``level`` and ``character`` record the weight-one space the series lies in:
    level ``|disc|``, nebentypus the Kronecker character of ``disc``.
    """

    form: QuadForm
    coeffs: tuple
    level: int
    character: int

    @property
    def precision(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def to_dict(self):
        return {
            "form": list(self.form),
            "disc": self.character,
            "level": self.level,
            "precision": self.precision,
            "coeffs": list(self.coeffs),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, obj):
        form = QuadForm(*obj["form"])
        coeffs = tuple(int(x) for x in obj["coeffs"])
        if len(coeffs) != obj["precision"] + 1:
            raise ValueError("coefficient count does not match precision")
        if form.disc != obj["disc"] or obj["level"] != abs(obj["disc"]):
            raise ValueError("inconsistent theta series metadata")
        return cls(form, coeffs, obj["level"], obj["disc"])

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def theta_expand(Q, N):
    """Theta series of ``Q`` to precision ``N`` from one sweep of the ellipse ``Q <= N``."""
    if N < 1:
        raise ValueError("precision must be at least 1")
    Q = QuadForm(*Q)
    coeffs = [0] * (N + 1)
    # the reduced form has the same values and the tightest box
    for v in represented_values(reduce_gl2(Q), N):
        coeffs[v] += 1
    D = Q.disc
    return ThetaSeries(Q, tuple(coeffs), abs(D), D)


def default_precision(forms):
    """``max(1000, 3 * max over forms of the sum of the two largest successive minima)``."""
    top = 0
    for Q in forms:
        m = sorted(successive_minima(Q))
        top = max(top, m[1] + m[2])
    return max(1000, 3 * top)


def f_K(t, N=None):
    """The theta series of a trace form ``t``; ``N`` defaults to :func:`default_precision`."""
    if N is None:
        N = default_precision([t])
    return theta_expand(t, N)


def first_two_nonzero(T):
    """``((n1, a(n1)), (n2, a(n2)))`` for the two smallest positive indices with ``a(n) != 0``."""
    found = []
    for n in range(1, len(T.coeffs)):
        if T.coeffs[n]:
            found.append((n, T.coeffs[n]))
            if len(found) == 2:
                return tuple(found)
    raise InsufficientPrecision(f"fewer than two nonzero terms up to q^{T.precision}")


def fingerprint(Q, N=None):
    """First two nonzero terms of the theta series of ``Q``.

    Uses precision ``N`` if given and sufficient, otherwise ``a + b + c`` of
    the GL2-reduced form: ``Q(1, 1) > Q(1, 0)`` always reaches the second
    nonzero term, while ``c`` does not when ``a == c``.
    """
    a, b, c = reduce_gl2(Q)
    need = a + b + c
    if N is None or N < need:
        N = need
    return first_two_nonzero(theta_expand(Q, N))


def exact_rank(rows):
    """Rank over Q of an integer matrix, by fraction-free (Bareiss) elimination."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if M[r][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, nrows):
            f = M[r][col]
            row = M[r]
            top = M[rank]
            for k in range(col, ncols):
                row[k] = (p * row[k] - f * top[k]) // prev
        prev = p
        rank += 1
    return rank


@dataclass
class IndependenceResult:
    independent: bool
    rank: int
    size: int
    precision: int
    # witnesses[i]: least prime p <= precision with a_i(p) != 0 and a_j(p) == 0 for j != i
    witnesses: list = field(default_factory=list)

    @property
    def witnesses_complete(self):
        return all(p is not None for p in self.witnesses)

    def __bool__(self):
        return self.independent


def linearly_independent(series):
    """Exact linear independence of theta series sharing precision and level."""
    series = list(series)
    if not series:
        return IndependenceResult(True, 0, 0, 0, [])
    N = series[0].precision
    if any(s.precision != N for s in series):
        raise PrecisionMismatch("all series must share the same precision")
    if any(s.level != series[0].level for s in series):
        raise PrecisionMismatch("all series must share the same level")
    rank = exact_rank([s.coeffs for s in series])
    sieve = prime_sieve(N)
    witnesses = []
    for i, s in enumerate(series):
        w = None
        for p in range(2, N + 1):
            if sieve[p] and s.coeffs[p] and all(o.coeffs[p] == 0 for j, o in enumerate(series) if j != i):
                w = p
                break
        witnesses.append(w)
    return IndependenceResult(rank == len(series), rank, len(series), N, witnesses)
