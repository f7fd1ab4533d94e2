"""Counts of monic irreducible polynomials over F_q, and the small integer
utilities needed to produce them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError


def mobius(m: int) -> int:
    """Möbius function by trial division."""
    if m < 1:
        raise DomainError(f"mobius needs m >= 1, got {m}")
    result = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def divisors(m: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= m:
        if m % i == 0:
            small.append(i)
            if i * i != m:
                large.append(m // i)
        i += 1
    return small + large[::-1]


def is_prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` and ``p`` prime, or ``None``."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return (q, 1)
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


def check_prime_power(q: int) -> tuple[int, int]:
    pe = is_prime_power(q) if isinstance(q, int) else None
    if pe is None:
        raise DomainError(f"q must be a prime power, got {q}")
    return pe


@dataclass(frozen=True)
class PrimeCountTable:
    """``counts[d]`` is the number of monic irreducibles of degree ``d``.

    Index 0 is unused and holds 0 so that degrees index directly.
    """

    q: int
    d_max: int
    counts: tuple[int, ...]

    def __getitem__(self, d: int) -> int:
        if not 1 <= d <= self.d_max:
            raise IndexError(d)
        return self.counts[d]

    def rows(self) -> list[tuple[int, int]]:
        return [(d, self.counts[d]) for d in range(1, self.d_max + 1)]


@lru_cache(maxsize=64)
def _pi_list(q: int, d_max: int) -> tuple[int, ...]:
    counts = [0] * (d_max + 1)
    for d in range(1, d_max + 1):
        total = sum(mobius(e) * q ** (d // e) for e in divisors(d))
        counts[d] = total // d
    for n in range(1, d_max + 1):
        if sum(d * counts[d] for d in divisors(n)) != q**n:
            raise AssertionError(f"Gauss identity failed at q={q}, n={n}")
    return tuple(counts)


def prime_counts(q: int, d_max: int) -> PrimeCountTable:
    """Exact table of pi_q(d) for 1 <= d <= d_max, by Möbius inversion of
    sum_{d|n} d*pi_q(d) = q**n.  The identity is re-checked on construction."""
    check_prime_power(q)
    if d_max < 1:
        raise DomainError(f"d_max must be >= 1, got {d_max}")
    return PrimeCountTable(q, d_max, _pi_list(q, d_max))
