"""Distributions of K(pi_n) (cycles of a random permutation) and of
Omega(f_n) (prime factors of a random monic polynomial over F_q).

Exact mode works with unbounded integers.  Bivariate polynomials are packed
into single integers (Kronecker substitution, each z-coefficient in a
``B``-bit slot) so that a whole row of the table moves through one gmpy2
operation.  Float mode runs normalised recurrences that stay inside [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb

import gmpy2
import numpy as np

from .errors import DomainError, ResourceError
from .fields import get_field, omega_arrays
from .prime_tab import check_prime_power, prime_counts

STIRLING_EXACT_CAP = 1000
OMEGA_EXACT_CAP = 400
IRREDUCIBLE_BUDGET = 10**6
BRUTE_FORCE_BUDGET = 2 * 10**6
TAIL_TARGET = 1e-15

_CHERNOFF_POINTS = 48


class Kind(str, Enum):
    CYCLES = "cycles"
    OMEGA = "omega"


class Mode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class DistributionRow:
    """Probability mass on k = 1..n; ``mass[k-1]`` holds P(k).

    In float mode for Omega, ``k_cap`` records the truncation of the
    z-degree (masses above it are stored as 0.0) and ``tail_bound`` the
    certified upper bound on the discarded mass.
    """

    n: int
    kind: Kind
    mode: Mode
    mass: tuple
    q: int | None = None
    k_cap: int | None = None
    tail_bound: float = 0.0

    def __post_init__(self):
        if len(self.mass) != self.n:
            raise ValueError(f"mass has length {len(self.mass)}, expected {self.n}")
        if (self.kind is Kind.OMEGA) != (self.q is not None):
            raise ValueError("q is required for Omega rows and only for them")
        if self.mode is Mode.EXACT:
            if sum(self.mass) != 1:
                raise AssertionError("exact row does not sum to 1")
            if any(not 0 < p <= 1 for p in self.mass):
                raise AssertionError("exact row leaves (0, 1]")
        else:
            total = math.fsum(self.mass)
            if abs(total - 1.0) > 1e-10:
                raise AssertionError(f"float row sums to {total!r}")
            if any(not 0.0 <= p <= 1.0 + 1e-12 for p in self.mass):
                raise AssertionError("float row leaves [0, 1]")

    def __getitem__(self, k: int):
        if not 1 <= k <= self.n:
            raise IndexError(k)
        return self.mass[k - 1]

    def as_float(self) -> np.ndarray:
        return np.array([float(p) for p in self.mass])


@dataclass(frozen=True)
class OmegaCountTable:
    """``counts[m][k]`` = number of monic degree-m polynomials with Omega = k,
    for 0 <= k <= m <= n."""

    q: int
    n: int
    counts: tuple[tuple[int, ...], ...]

    def row(self, m: int) -> tuple[int, ...]:
        return self.counts[m]


@dataclass(frozen=True)
class IrreduciblesList:
    q: int
    d_max: int
    polys: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)

    def count(self, d: int) -> int:
        return len(self.polys[d])

    def up_to(self, d: int) -> list[tuple[int, ...]]:
        return [p for e in range(1, d + 1) for p in self.polys.get(e, [])]


def _slot_bits(max_value: int) -> int:
    # byte-aligned slots so rows can be unpacked with to_bytes
    return ((max_value.bit_length() + 1 + 7) // 8) * 8


def _unpack(packed, slots: int, bits: int) -> list[int]:
    nbytes = bits // 8
    raw = int(packed).to_bytes(slots * nbytes, "little")
    return [int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") for i in range(slots)]


# --- permutations ---


@lru_cache(maxsize=16)
def stirling_numbers(n: int) -> tuple[int, ...]:
    """Unsigned Stirling numbers of the first kind |s(n,k)|, k = 0..n.

    They are the coefficients of z(z+1)...(z+n-1); the product is formed by
    binary splitting on packed integers.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n == 0:
        return (1,)
    bits = _slot_bits(math.factorial(n))
    one = gmpy2.mpz(1) << bits

    def product(lo: int, hi: int):
        if hi - lo == 1:
            return one + lo
        mid = (lo + hi) // 2
        return product(lo, mid) * product(mid, hi)

    return tuple(_unpack(product(0, n), n + 1, bits))


def stirling_row(n: int) -> DistributionRow:
    """Exact law of the cycle count: P(K = k) = |s(n,k)| / n!."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n > STIRLING_EXACT_CAP:
        raise ResourceError(f"exact cycle distribution capped at n <= {STIRLING_EXACT_CAP}; use float mode")
    s = stirling_numbers(n)
    nf = math.factorial(n)
    return DistributionRow(n, Kind.CYCLES, Mode.EXACT, tuple(Fraction(s[k], nf) for k in range(1, n + 1)))


def cycle_probabilities(n: int) -> np.ndarray:
    """Float P(K(pi_n) = k) for k = 0..n via
    P_n(k) = ((n-1) P_{n-1}(k) + P_{n-1}(k-1)) / n."""
    p = np.zeros(n + 1)
    p[0] = 1.0
    for m in range(1, n + 1):
        nxt = np.empty(m + 1)
        nxt[0] = 0.0
        nxt[1:m] = ((m - 1) * p[1:m] + p[0 : m - 1]) / m
        nxt[m] = p[m - 1] / m
        p[: m + 1] = nxt
    return p


def stirling_row_float(n: int) -> DistributionRow:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    p = cycle_probabilities(n)
    return DistributionRow(n, Kind.CYCLES, Mode.FLOAT, tuple(float(x) for x in p[1:]))


# --- polynomials: exact ---

_omega_cache: dict[int, OmegaCountTable] = {}


def _omega_counts_packed(q: int, n: int) -> OmegaCountTable:
    pi = prime_counts(q, n).counts
    bits = _slot_bits(q**n)
    rows = [gmpy2.mpz(0)] * (n + 1)
    rows[0] = gmpy2.mpz(1)
    # multiply by (1 - z u^d)^(-pi_d) = sum_j C(pi_d + j - 1, j) z^j u^(dj), in place
    for d in range(1, n + 1):
        coef = [gmpy2.mpz(comb(pi[d] + j - 1, j)) for j in range(n // d + 1)]
        for m in range(n, d - 1, -1):
            acc = rows[m]
            for j in range(1, m // d + 1):
                acc += (coef[j] * rows[m - d * j]) << (j * bits)
            rows[m] = acc
    counts = tuple(tuple(_unpack(rows[m], m + 1, bits)) for m in range(n + 1))
    return OmegaCountTable(q, n, counts)


def omega_counts(q: int, n: int) -> OmegaCountTable:
    """Exact N_q(m, k) for all m <= n from the Euler product
    prod_d (1 - z u^d)^(-pi_q(d)), truncated at u^n."""
    check_prime_power(q)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n > OMEGA_EXACT_CAP:
        raise ResourceError(f"exact Omega counts capped at n <= {OMEGA_EXACT_CAP}; use float mode")
    cached = _omega_cache.get(q)
    if cached is None or cached.n < n:
        cached = _omega_counts_packed(q, max(n, 1))
        _omega_cache[q] = cached
    if cached.n == n:
        return cached
    return OmegaCountTable(q, n, cached.counts[: n + 1])


def omega_row(q: int, n: int) -> DistributionRow:
    """Exact law of Omega(f_n): N_q(n, k) / q^n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    row = omega_counts(q, n).counts[n]
    total = q**n
    return DistributionRow(n, Kind.OMEGA, Mode.EXACT, tuple(Fraction(row[k], total) for k in range(1, n + 1)), q=q)


# --- polynomials: float ---


def _stable_degree(q: int) -> int:
    """Smallest D such that for d > D, d*pi_q(d)/q^d rounds to 1.0 and
    q^-d is below 2^-120.  Uses |d pi_q(d) - q^d| <= 2 q^(d/2)."""
    D = 1
    while 2.0 * q ** (-D / 2) >= 2.0**-60:
        D += 1
    return D


def _euler_recurrence(q: int, n: int, start: np.ndarray, zmul) -> np.ndarray:
    """Rows p_0..p_n of the probability-scaled generating function.

    From u d/du log prod_d (1 - z (u/q)^d)^(-pi_d):
        m p_m = sum_d c_d T_d(m),   c_d = d pi_d / q^d,
        T_d(m) = z (p_{m-d} + q^-d T_d(m-d)).
    Beyond the stable degree c_d == 1.0 and the q^-d term vanishes, so that
    part of the sum collapses to z applied to a prefix sum of rows.
    ``zmul`` applies multiplication by z to a stack of rows.
    """
    D = min(n, _stable_degree(q))
    pi = prime_counts(q, max(D, 1)).counts
    c = np.array([d * pi[d] / q**d for d in range(1, D + 1)])
    rho = np.array([float(q) ** -d for d in range(1, D + 1)])
    width = start.shape[0]
    P = np.zeros((n + 1, width))
    P[0] = start
    prefix = np.zeros((n + 1, width))
    prefix[0] = start
    ring = D + 1
    hist = np.zeros((ring, D, width))
    for m in range(1, n + 1):
        dm = min(D, m)
        d = np.arange(1, dm + 1)
        inner = P[m - d] + rho[:dm, None] * hist[(m - d) % ring, d - 1]
        T = zmul(inner)
        slot = hist[m % ring]
        slot[:] = 0.0
        slot[:dm] = T
        total = c[:dm] @ T
        if m > D:
            total = total + zmul(prefix[m - D - 1][None, :])[0]
        P[m] = total / m
        prefix[m] = prefix[m - 1] + P[m]
    return P


def _shift(rows: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rows)
    out[:, 1:] = rows[:, :-1]
    return out


def omega_probabilities(q: int, n: int, k_cap: int) -> np.ndarray:
    """Float P(Omega(f_n) = k) for k = 0..k_cap (exact up to rounding on
    that range; truncation only discards z-degrees above k_cap)."""
    start = np.zeros(k_cap + 1)
    start[0] = 1.0
    return _euler_recurrence(q, n, start, _shift)[n]


def omega_pgf(q: int, n: int, t: np.ndarray) -> np.ndarray:
    """E[t^Omega(f_n)] for each real t > 0."""
    t = np.asarray(t, dtype=float)
    return _euler_recurrence(q, n, np.ones_like(t), lambda rows: rows * t)[n]


def default_k_cap(n: int) -> int:
    return math.ceil(8 * math.log(n)) + 16 if n > 1 else 1


def omega_tail_certificate(q: int, n: int, k_cap: int) -> tuple[float, int]:
    """Upper bound on P(Omega(f_n) > k_cap), and the least cap whose bound is
    below TAIL_TARGET.

    Chernoff: P(Omega >= x) <= E[t^Omega] t^(-x) for t > 1, minimised over a
    fixed grid of t with E[t^Omega] computed from the generating function.
    """
    if k_cap >= n:
        return 0.0, min(k_cap, n)
    # E[t^Omega] grows like (t/q)^n once t >= q, so only 1 < t < q is useful
    t = np.geomspace(1.02, q, _CHERNOFF_POINTS + 1)[:-1]
    with np.errstate(over="ignore", invalid="ignore"):
        pgf = omega_pgf(q, n, t) * (1 + 1e-9)
    ok = np.isfinite(pgf)
    log_pgf = np.log(pgf[ok])
    log_t = np.log(t[ok])
    bound = float(np.min(np.exp(log_pgf - (k_cap + 1) * log_t)))
    need = np.floor((log_pgf - math.log(TAIL_TARGET)) / log_t).astype(int)
    return bound, int(min(n, need.min()))


def omega_dist_float(q: int, n: int, k_cap: int | None = None) -> DistributionRow:
    check_prime_power(q)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    cap = default_k_cap(n) if k_cap is None else k_cap
    if cap < 1:
        raise DomainError(f"k_cap must be >= 1, got {cap}")
    cap = min(cap, n)
    bound, safe = omega_tail_certificate(q, n, cap)
    if bound >= TAIL_TARGET and k_cap is None:
        # the default is only a starting point; small q has a fat geometric tail
        cap = max(cap, safe)
        bound, safe = omega_tail_certificate(q, n, cap)
    if bound >= TAIL_TARGET:
        raise DomainError(f"k_cap={cap} leaves tail bound {bound:.3g} >= {TAIL_TARGET:g}; minimal safe k_cap is {safe}")
    p = omega_probabilities(q, n, cap)
    mass = tuple(float(x) for x in p[1:]) + (0.0,) * (n - cap)
    return DistributionRow(n, Kind.OMEGA, Mode.FLOAT, mass, q=q, k_cap=cap, tail_bound=bound)


# --- brute-force oracle ---


def enumerate_irreducibles(q: int, d_max: int, budget: int = IRREDUCIBLE_BUDGET) -> IrreduciblesList:
    check_prime_power(q)
    if d_max < 1:
        raise DomainError(f"d_max must be >= 1, got {d_max}")
    if q**d_max > budget:
        raise ResourceError(f"q^d_max = {q**d_max} exceeds enumeration budget {budget}")
    F = get_field(q)
    return IrreduciblesList(q, d_max, {d: list(F.irreducibles_of_degree(d)) for d in range(1, d_max + 1)})


def brute_force_omega(q: int, n: int, budget: int = BRUTE_FORCE_BUDGET) -> OmegaCountTable:
    """Tally Omega over every monic polynomial of degree <= n by explicit
    polynomial arithmetic over F_q (no use of the Euler product)."""
    check_prime_power(q)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if q**n > budget:
        raise ResourceError(f"q^n = {q**n} exceeds brute-force budget {budget}")
    arrays = omega_arrays(get_field(q), n)
    counts = [tuple(int(c) for c in np.bincount(a, minlength=m + 1)) for m, a in enumerate(arrays)]
    return OmegaCountTable(q, n, tuple(counts))
