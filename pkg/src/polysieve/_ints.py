"""Integer helpers shared across the package: primality, factoring, and the
classical multiplicative functions (omega, tau, mu) at desk scale.

Everything here is exact.  Trial division uses a 2/3/5 wheel; the batch
factor counter resolves large cofactors with a deterministic Miller-Rabin
test (valid far beyond the 64-bit range used here).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

# Deterministic Miller-Rabin witness set for n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Gap pattern of the 2/3/5 wheel, starting from 7.
_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)


def is_prime(m: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed witnesses)."""
    if m < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % p == 0:
            return m == p
    d = m - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes <= limit, by sieve of Eratosthenes."""
    if limit < 2:
        return ()
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return tuple(int(p) for p in np.nonzero(flags)[0])


def prime_factors(m: int) -> tuple[int, ...]:
    """Distinct prime divisors of |m|, ascending.  Wheel trial division."""
    m = abs(m)
    if m == 0:
        raise ValueError("prime_factors: zero has no factorization")
    out = []
    for p in (2, 3, 5):
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
    q = 7
    i = 0
    while q * q <= m:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += _WHEEL[i]
        i = (i + 1) % len(_WHEEL)
    if m > 1:
        out.append(m)
    return tuple(out)


def omega(m: int) -> int:
    """Number of distinct prime divisors of |m|; rejects m = 0."""
    if m == 0:
        raise ValueError("omega(0) is undefined")
    m = abs(m)
    if m == 1:
        return 0
    return len(prime_factors(m))


def mobius(m: int) -> int:
    """Mobius function of a positive integer."""
    if m <= 0:
        raise ValueError("mobius: argument must be positive")
    if m == 1:
        return 1
    mu = 1
    for p in (2, 3, 5):
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            mu = -mu
    q = 7
    i = 0
    while q * q <= m:
        if m % q == 0:
            m //= q
            if m % q == 0:
                return 0
            mu = -mu
        q += _WHEEL[i]
        i = (i + 1) % len(_WHEEL)
    if m > 1:
        mu = -mu
    return mu


def is_squarefree(m: int) -> bool:
    if m == 0:
        return False
    return mobius(abs(m)) != 0


def tau(m: int) -> int:
    """Number of divisors of |m| >= 1."""
    m = abs(m)
    if m == 0:
        raise ValueError("tau(0) is undefined")
    count = 1
    for p in prime_factors(m):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        count *= e + 1
    return count


@lru_cache(maxsize=None)
def squarefree_up_to(limit: int) -> tuple[int, ...]:
    """Squarefree integers in [1, limit], ascending."""
    return tuple(d for d in range(1, limit + 1) if mobius(d) != 0)


def is_perfect_square(m: int) -> bool:
    """Exact test; negative numbers are never squares."""
    if m < 0:
        return False
    r = math.isqrt(m)
    return r * r == m


def omega_batch(values: np.ndarray, track_squarefree: bool = False):
    """Vectorized distinct-prime counts for an array of nonzero int64 values.

    Trial-divides by all primes up to cbrt(max); each remaining cofactor then
    has at most two prime factors and is resolved exactly (unit, square,
    prime, or semiprime).  Returns the omega array, or a pair
    (omega, squarefree_mask) when track_squarefree is set.
    """
    vals = np.abs(np.asarray(values, dtype=np.int64))
    if vals.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return (empty, np.ones(0, dtype=bool)) if track_squarefree else empty
    if np.any(vals == 0):
        raise ValueError("omega_batch: zero entry")
    counts = np.zeros(vals.shape, dtype=np.int64)
    sqfree = np.ones(vals.shape, dtype=bool)
    rem = vals.copy()
    vmax = int(rem.max())
    for p in primes_up_to(max(2, round(vmax ** (1 / 3)) + 2)):
        mask = rem % p == 0
        if not mask.any():
            continue
        counts[mask] += 1
        rem[mask] //= p
        again = mask & (rem % p == 0)
        if again.any():
            sqfree &= ~again
            while again.any():
                rem[again] //= p
                again = again & (rem % p == 0)
    # Cofactors now have no prime factor <= cbrt(vmax): 1, p, p^2 or p*q.
    flat_rem = rem.ravel()
    flat_counts = counts.ravel()
    flat_sqfree = sqfree.ravel()
    for idx in np.nonzero(flat_rem > 1)[0]:
        c = int(flat_rem[idx])
        r = math.isqrt(c)
        if r * r == c:
            flat_counts[idx] += 1
            flat_sqfree[idx] = False
        elif is_prime(c):
            flat_counts[idx] += 1
        else:
            flat_counts[idx] += 2
    if track_squarefree:
        return counts, sqfree
    return counts
