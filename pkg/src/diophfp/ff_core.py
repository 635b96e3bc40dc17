"""Arithmetic in F_p: primality, quadratic characters, square roots and
representations p = x^2 + D*y^2.

Residue 0 counts as a square throughout, so ``chi_prime`` is the character
with chi'(0) = +1 that appears in the pair and triple counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import NamedTuple

import numpy as np

# Deterministic Miller-Rabin witnesses for all n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for every 64-bit input."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
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


def odd_primes(upto: int, start: int = 3) -> list[int]:
    """Odd primes in [start, upto], ascending."""
    if upto < 3:
        return []
    sieve = np.ones(upto + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, isqrt(upto) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return [int(q) for q in np.nonzero(sieve)[0] if q >= max(start, 3)]


@dataclass(frozen=True)
class PrimeContext:
    """An odd prime p with its table of squares.

    ``is_square[r]`` is True iff r = x^2 for some x (so r = 0 is marked).
    ``root[r]`` holds min(x, p - x) for squares and -1 for non-squares.
    ``chi[r]`` is the Legendre symbol as int8 with chi[0] = 0.
    """

    p: int
    is_square: np.ndarray = field(repr=False, compare=False)
    root: np.ndarray = field(repr=False, compare=False)
    chi: np.ndarray = field(repr=False, compare=False)

    def legendre(self, a: int) -> int:
        a %= self.p
        if a == 0:
            return 0
        return 1 if self.is_square[a] else -1

    def chi_prime(self, a: int) -> int:
        return 1 if self.is_square[a % self.p] else -1


def make_context(p: int) -> PrimeContext:
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    xs = np.arange((p - 1) // 2 + 1, dtype=np.int64)
    sq = xs * xs % p
    is_square = np.zeros(p, dtype=bool)
    is_square[sq] = True
    root = np.full(p, -1, dtype=np.int64)
    # xs ascending and each square hit exactly once for x <= (p-1)/2
    root[sq] = xs
    chi = np.where(is_square, 1, -1).astype(np.int8)
    chi[0] = 0
    for arr in (is_square, root, chi):
        arr.setflags(write=False)
    return PrimeContext(p, is_square, root, chi)


@lru_cache(maxsize=256)
def prime_context(p: int) -> PrimeContext:
    """Cached ``make_context``; contexts are immutable and shareable."""
    return make_context(p)


def legendre(a: int, ctx: PrimeContext) -> int:
    return ctx.legendre(a)


def chi_prime(a: int, ctx: PrimeContext) -> int:
    """Legendre symbol with the convention (0/p)' = +1."""
    return ctx.chi_prime(a)


def sqrt_mod(a: int, ctx: PrimeContext) -> int | None:
    """Smaller square root of a mod p, or None for a non-square.

    Tonelli-Shanks; the smallest quadratic non-residue serves as the
    deterministic generator of the 2-Sylow subgroup.
    """
    p = ctx.p
    a %= p
    if a == 0:
        return 0
    if not ctx.is_square[a]:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while ctx.is_square[z]:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


class Representation(NamedTuple):
    x: int
    y: int
    D: int


def cornacchia(p: int, D: int) -> Representation | None:
    """Solve x^2 + D*y^2 = p with x, y > 0.

    For D = 1 the two orderings are both solutions; the one with the
    smaller x is returned. Sign choices for CM coefficients live in
    :mod:`diophfp.modforms`.
    """
    if D < 1:
        raise ValueError("D must be positive")
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if D >= p:
        return None
    ctx = prime_context(p)
    r0 = sqrt_mod(-D, ctx)
    if r0 is None:
        return None
    for r in (p - r0, r0):
        a, b = p, r
        while b * b > p:
            a, b = b, a % b
        rem = p - b * b
        if rem > 0 and rem % D == 0:
            y = isqrt(rem // D)
            if y * y * D == rem and b > 0:
                x = b
                if D == 1 and x > y:
                    x, y = y, x
                return Representation(x, y, D)
    return None


def quad_char_sum(alpha: int, beta: int, gamma: int, ctx: PrimeContext) -> int:
    """Sum of (alpha*x^2 + beta*x + gamma / p) over all x in F_p."""
    p = ctx.p
    x = np.arange(p, dtype=np.int64)
    vals = ((alpha % p) * x % p * x + (beta % p) * x + gamma % p) % p
    return int(ctx.chi[vals].sum(dtype=np.int64))
