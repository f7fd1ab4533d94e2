"""Comparison of the Omega and cycle-count laws: pointwise ratios against
h_q(r), the theorem envelope, total variation and its interval split, and
moments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .asymptotics import hq, poisson_pmf
from .errors import DomainError
from .exact_dist import (
    OMEGA_EXACT_CAP,
    DistributionRow,
    Kind,
    Mode,
    omega_counts,
    omega_dist_float,
    omega_pgf,
    omega_row,
    stirling_row,
    stirling_row_float,
)
from .prime_tab import check_prime_power, prime_counts

HQ_TOL = 1e-12


def default_mode(n: int) -> Mode:
    return Mode.EXACT if n <= OMEGA_EXACT_CAP else Mode.FLOAT


@lru_cache(maxsize=64)
def distribution_pair(q: int, n: int, mode: Mode | None = None) -> tuple[DistributionRow, DistributionRow]:
    """(cycles, omega) rows for the same n, in one mode."""
    check_prime_power(q)
    mode = default_mode(n) if mode is None else Mode(mode)
    if mode is Mode.EXACT:
        return stirling_row(n), omega_row(q, n)
    return stirling_row_float(n), omega_dist_float(q, n)


def total_variation(a: DistributionRow, b: DistributionRow):
    """Half the L1 distance; exact Fraction when both rows are exact."""
    if a.n != b.n:
        raise DomainError(f"rows have different n ({a.n} vs {b.n})")
    if a.mode is Mode.EXACT and b.mode is Mode.EXACT:
        return sum((abs(x - y) for x, y in zip(a.mass, b.mass)), Fraction(0)) / 2
    return math.fsum(abs(float(x) - float(y)) for x, y in zip(a.mass, b.mass)) / 2


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    q: int
    k: int
    r: float
    p_omega: float
    p_cycles: float
    ratio: float
    hq_r: float | None
    residual: float | None
    normalized: float | None
    envelope: float | None


def _comparison_row(q: int, n: int, k: int, p_omega: float, p_cycles: float) -> ComparisonRow:
    log_n = math.log(n)
    r = (k - 1) / log_n
    ratio = p_omega / p_cycles
    if r >= q:
        return ComparisonRow(n, q, k, r, p_omega, p_cycles, ratio, None, None, None, None)
    h = hq(q, r, HQ_TOL)
    residual = abs(ratio - h)
    scale = poisson_pmf(log_n, k - 1) * k / (q * log_n**2)
    envelope = abs(p_omega - p_cycles * h) / scale
    return ComparisonRow(n, q, k, r, p_omega, p_cycles, ratio, h, residual, residual * q * log_n**2 / k, envelope)


def default_k_max(n: int) -> int:
    return min(n, math.ceil(3 * math.log(n)))


def ratio_report(q: int, n: int, k_max: int | None = None, mode: Mode | None = None) -> list[ComparisonRow]:
    """One row per k = 1..k_max.  Fields depending on h_q(r) are None once
    r >= q, where h_q is undefined."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    k_max = default_k_max(n) if k_max is None else k_max
    if not 1 <= k_max <= n:
        raise DomainError(f"k_max must lie in [1, n], got {k_max}")
    cycles, omega = distribution_pair(q, n, mode)
    return [_comparison_row(q, n, k, float(omega[k]), float(cycles[k])) for k in range(1, k_max + 1)]


def theorem_residual(q: int, n: int, k: int, delta: float, mode: Mode | None = None) -> float:
    """|P(Omega=k) - P(K=k) h_q(r)| / (P(X=k-1) k / (q (log n)^2)), X ~ Poisson(log n).

    The theorem bounds this by C_delta (r+1)^(C_delta r) with C_delta
    unknown, so nothing is divided out here.
    """
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    if n < 4 * (1 - delta) / delta**2:
        raise DomainError(f"hypothesis n >= 4(1-delta)/delta^2 fails: n={n}, delta={delta}")
    if q < 1 / (1 - delta) ** 2:
        raise DomainError(f"hypothesis q >= 1/(1-delta)^2 fails: q={q}, delta={delta}")
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, n], got {k}")
    r = (k - 1) / math.log(n)
    if r > q * (1 - delta):
        raise DomainError(f"hypothesis r <= q(1-delta) fails: r={r:.6g}, q(1-delta)={q * (1 - delta):.6g}")
    cycles, omega = distribution_pair(q, n, mode)
    return _comparison_row(q, n, k, float(omega[k]), float(cycles[k])).envelope


# --- total variation ---


def interval_bounds(q: int, n: int) -> tuple[float, float]:
    """Upper ends of I1 = [1, 3 log n / 2] and I2 = (3 log n / 2, sqrt(q) log n].

    When sqrt(q) <= 3/2 the second interval is empty and I3 starts right
    after I1, so the three always partition [1, n].
    """
    a = 1.5 * math.log(n)
    return a, max(a, math.sqrt(q) * math.log(n))


def tv_decomposition(q: int, n: int, mode: Mode | None = None):
    """(S1, S2, S3): sums of |P(Omega=k) - P(K=k)| over I1, I2, I3.
    Not halved, so S1 + S2 + S3 = 2 d_TV."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    cycles, omega = distribution_pair(q, n, mode)
    exact = cycles.mode is Mode.EXACT and omega.mode is Mode.EXACT
    a, b = interval_bounds(q, n)
    parts: list[list] = [[], [], []]
    for k in range(1, n + 1):
        diff = abs(omega[k] - cycles[k]) if exact else abs(float(omega[k]) - float(cycles[k]))
        parts[0 if k <= a else 1 if k <= b else 2].append(diff)
    if exact:
        return tuple(sum(p, Fraction(0)) for p in parts)
    return tuple(math.fsum(p) for p in parts)


@dataclass(frozen=True)
class TVReport:
    n: int
    q: int
    d_tv: Fraction | float
    scaled: float
    s1: Fraction | float
    s2: Fraction | float
    s3: Fraction | float
    mode: str


def tv_report(q: int, n: int, mode: Mode | None = None) -> TVReport:
    cycles, omega = distribution_pair(q, n, mode)
    d = total_variation(cycles, omega)
    s1, s2, s3 = tv_decomposition(q, n, mode)
    scaled = float(d) * q * math.sqrt(math.log(n))
    return TVReport(n, q, d, scaled, s1, s2, s3, omega.mode.value)


def _tv_job(args):
    q, n, mode = args
    return tv_report(q, n, mode)


def tv_scaling_study(q_list, n_list, mode: Mode | None = None, threads: int = 1) -> list[TVReport]:
    """TV reports over the (q, n) grid, ordered by (q, n)."""
    jobs = sorted({(int(q), int(n)) for q in q_list for n in n_list})
    for q, _ in jobs:
        check_prime_power(q)
    args = [(q, n, mode) for q, n in jobs]
    if threads > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(_tv_job, args))
    else:
        reports = [_tv_job(a) for a in args]
    return sorted(reports, key=lambda r: (r.q, r.n))


def k_equals_n_gap(q: int, n: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact (|P(Omega=n) - P(K=n)|, closed form, lower bound) at k = n:
    the closed form is (prod_{i<n} (1 + i/q) - 1) / n!, the lower bound
    C(n, 2) / (q n!)."""
    check_prime_power(q)
    nf = factorial(n)
    gap = abs(Fraction(omega_counts(q, n).counts[n][n], q**n) - Fraction(1, nf))
    prod = Fraction(1)
    for i in range(1, n):
        prod *= 1 + Fraction(i, q)
    return gap, (prod - 1) / nf, Fraction(comb(n, 2), q * nf)


# --- moments ---


def moments(row: DistributionRow):
    """(mean, variance, E[2^k]); exact rationals for exact rows."""
    ks = range(1, row.n + 1)
    if row.mode is Mode.EXACT:
        mean = sum((k * p for k, p in zip(ks, row.mass)), Fraction(0))
        second = sum((k * k * p for k, p in zip(ks, row.mass)), Fraction(0))
        e2k = sum((2**k * p for k, p in zip(ks, row.mass)), Fraction(0))
        return mean, second - mean * mean, e2k
    mass = [float(p) for p in row.mass]
    mean = math.fsum(k * p for k, p in zip(ks, mass))
    var = math.fsum((k - mean) ** 2 * p for k, p in zip(ks, mass))
    if row.kind is Kind.OMEGA:
        # 2^k magnifies the mass dropped above k_cap; the pgf recurrence has no cap
        return mean, var, float(omega_pgf(row.q, row.n, np.array([2.0]))[0])
    logs = [math.log(p) + k * math.log(2) for k, p in zip(ks, mass) if p > 0]
    top = max(logs)
    e2k = math.exp(top) * math.fsum(math.exp(v - top) for v in logs)
    return mean, var, e2k


# --- coupling-bound comparison ---


@dataclass(frozen=True)
class AbtRow:
    k: int
    ratio: float
    value: float


@dataclass(frozen=True)
class AbtReport:
    q: int
    n: int
    rows: tuple[AbtRow, ...]
    supremum: float | None


def abt_bound_check(q: int, n: int, mode: Mode | None = None) -> AbtReport:
    """|ratio - 1| q (log n - k) / k for each k < log n."""
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    log_n = math.log(n)
    ks = [k for k in range(1, n + 1) if k < log_n]
    if not ks or log_n <= 1:
        return AbtReport(q, n, (), None)
    cycles, omega = distribution_pair(q, n, mode)
    rows = []
    for k in ks:
        ratio = float(Fraction(omega[k]) / Fraction(cycles[k])) if omega.mode is Mode.EXACT else float(omega[k]) / float(cycles[k])
        rows.append(AbtRow(k, ratio, abs(ratio - 1) * q * (log_n - k) / k))
    return AbtReport(q, n, tuple(rows), max(r.value for r in rows))


def first_row_gap_bound(q: int, n: int) -> float:
    """2 q^(floor(n/2) - n): bound on |n pi_q(n) / q^n - 1|."""
    return 2.0 * float(q) ** (n // 2 - n)


def first_row_ratio(q: int, n: int) -> Fraction:
    return Fraction(n * prime_counts(q, n).counts[n], q**n)
