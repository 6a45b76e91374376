"""Prime sieving, deterministic Miller-Rabin and Pollard-rho factorization.

All integer routines are restricted to the signed 64-bit range.
"""
from __future__ import annotations

import math
import random
from collections import Counter

import numpy as np

from .errors import DomainError

INT64_MAX = 2**63 - 1

# Deterministic for every n < 3.3e24, which covers the 64-bit range.
MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n, ascending (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if sieve[p]:
            sieve[p * p::2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def prime_powers_up_to(n: int) -> list[tuple[int, int, int]]:
    """Triples ``(p**k, p, k)`` with ``p**k <= n``, sorted by the power."""
    out = []
    for p in primes_up_to(n).tolist():
        q, k = p, 1
        while q <= n:
            out.append((q, p, k))
            q *= p
            k += 1
    out.sort()
    return out


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n > INT64_MAX:
        raise DomainError(f"{n} exceeds the 64-bit range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MR_WITNESSES:
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


def _pollard_brent(n: int, rng: random.Random) -> int:
    """A nontrivial factor of the odd composite ``n``."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` as ascending ``(prime, exponent)`` pairs.

    Trial division by small primes, then Pollard-rho (Brent variant) on
    whatever cofactor remains.

    >>> factorize(180)
    [(2, 2), (3, 2), (5, 1)]
    """
    n = int(n)
    if n < 2 or n > INT64_MAX:
        raise DomainError(f"factorize needs 2 <= n <= 2**63-1, got {n}")
    counts: Counter[int] = Counter()
    for p in range(2, 1000):
        if p * p > n:
            break
        while n % p == 0:
            counts[p] += 1
            n //= p
    rng = random.Random(n)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] += 1
            continue
        d = _pollard_brent(m, rng)
        stack.extend((d, m // d))
    return sorted(counts.items())
