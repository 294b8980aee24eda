"""Exact elementary number theory shared by the rest of the package."""
from math import gcd, isqrt

__all__ = [
    "NotFundamental",
    "is_prime",
    "prime_sieve",
    "kronecker",
    "is_squarefree",
    "is_fundamental",
    "three_reflection",
    "integer_kernel",
]


class NotFundamental(ValueError):
    pass


# Deterministic for n < 3.3e24 (Sorenson-Webster); covers the 2**64 requirement.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
_MR_LIMIT = 3317044064679887385961981


def is_prime(n):
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 53 * 53:
        return True
    if n >= _MR_LIMIT:
        return _trial_division(n)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _trial_division(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


def prime_sieve(limit):
    """Return a bytearray ``s`` with ``s[n] == 1`` iff ``n`` is prime, for ``0 <= n <= limit``."""
    s = bytearray([1]) * (limit + 1)
    s[0] = 0
    if limit >= 1:
        s[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if s[p]:
            s[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return s


def _jacobi(a, n):
    # n odd and positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(d, n):
    """Kronecker symbol (d/n)."""
    if n == 0:
        return 1 if d in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * _jacobi(d, n)


def is_squarefree(n):
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1 if p == 2 else 2
    return True


def is_fundamental(d):
    """True iff ``d`` is the discriminant of a quadratic field, or ``d == 1``."""
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def three_reflection(d):
    """Map ``d`` to ``-3d / gcd(3, d)**2``; an involution on fundamental discriminants."""
    if d == 0 or not is_fundamental(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    g = gcd(3, d)
    return -3 * d // (g * g)


def integer_kernel(row):
    """Basis of the saturated integer kernel of the linear form ``x -> row . x``.

    Column operations (extended Euclid) turn ``row`` into ``(g, 0, ..., 0)``;
    the trailing columns of the accumulated unimodular matrix span the kernel.
    """
    n = len(row)
    v = list(row)
    # columns of U, stored as lists
    cols = [[int(i == j) for i in range(n)] for j in range(n)]
    for j in range(1, n):
        while v[j] != 0:
            q = v[0] // v[j]
            v[0], v[j] = v[j], v[0] - q * v[j]
            cols[0], cols[j] = cols[j], [x - q * y for x, y in zip(cols[0], cols[j])]
    if v[0] == 0:
        return [cols[j] for j in range(n)]
    return [cols[j] for j in range(1, n)]
