"""The Euler-product correction h_q(x), Poisson and Gamma helpers, and the
three main terms for P(Omega(f_n) = k).

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .prime_tab import check_prime_power, divisors, prime_counts

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class HqSeries:
    """Truncated series for log h_q(x) = sum_{m>=2} a_m(x), with

        a_m(x) = q^-m m^-1 sum_{d|m, d<m} d pi_q(d) (x^(m/d) - x).

    ``coeffs[m]`` lists ``(m/d, log weight)`` pairs where the weight is
    ``d pi_q(d) / (m q^m)``; weights are kept as logs since q^-m underflows
    long before the series needs to stop for x close to q.
    """

    q: int
    n_trunc: int
    coeffs: tuple[tuple[tuple[int, float], ...], ...]

    def term(self, m: int, x: float) -> float:
        return math.fsum(_pow_weight(lw, e, x) - _pow_weight(lw, 1, x) for e, lw in self.coeffs[m])

    def term_derivative(self, m: int, x: float) -> float:
        return math.fsum(e * _pow_weight(lw, e - 1, x) - math.exp(lw) for e, lw in self.coeffs[m])

    def degree(self, m: int) -> int:
        return max((e for e, _ in self.coeffs[m]), default=0)

    def log_value(self, x: float) -> float:
        return math.fsum(self.term(m, x) for m in range(2, self.n_trunc + 1))

    def log_derivative(self, x: float) -> float:
        return math.fsum(self.term_derivative(m, x) for m in range(2, self.n_trunc + 1))


def _pow_weight(log_w: float, e: int, x: float) -> float:
    if e == 0:
        return math.exp(log_w)
    if x == 0.0:
        return 0.0
    return math.exp(log_w + e * math.log(x))


@lru_cache(maxsize=64)
def hq_series(q: int, n_trunc: int) -> HqSeries:
    check_prime_power(q)
    pi = prime_counts(q, max(1, n_trunc // 2)).counts
    log_q = math.log(q)
    coeffs: list[tuple[tuple[int, float], ...]] = [(), ()]
    for m in range(2, n_trunc + 1):
        base = -math.log(m) - m * log_q
        coeffs.append(tuple((m // d, base + math.log(d * pi[d])) for d in divisors(m)[:-1]))
    return HqSeries(q, n_trunc, tuple(coeffs))


def _check_x(q: int, x: float) -> None:
    check_prime_power(q)
    if not (0.0 <= x < q):
        raise DomainError(f"h_q(x) needs 0 <= x < q (diverges as x -> q); got q={q}, x={x}")


def hq_tail_bound(q: int, x: float, n_trunc: int) -> float:
    """Upper bound on sum_{m > n_trunc} |a_m(x)|.

    Each divisor term q^(d-m) x^(m/d) is log-convex in d, so it is at most
    its value at d = 1 or d = m/2; there are fewer than m of them, which
    absorbs the 1/m.  The -x part is at most 2 x q^(-m/2) / m.
    """
    M = n_trunc + 1
    rho, sigma = x / q, q**-0.5
    return q * rho**M / (1 - rho) + (x * x + 2 * x / M) * sigma**M / (1 - sigma)


def hq_derivative_tail_bound(q: int, x: float, n_trunc: int) -> float:
    """Same argument for the termwise derivative: each divisor term is at
    most (x/q)^(m-1) + x q^(-m/2), times fewer than m divisors."""
    M = n_trunc + 1
    rho, sigma = x / q, q**-0.5
    return (
        M * rho ** (M - 1) / (1 - rho) ** 2
        + x * M * sigma**M / (1 - sigma) ** 2
        + (2 / M) * sigma**M / (1 - sigma)
    )


def _truncation(q: int, x: float, tol: float, bound) -> int:
    if tol <= 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    n = 40
    if x > 0:
        n = max(n, math.ceil(2 * math.log(1 / tol) / math.log(q / x)))
    while bound(q, x, n) >= tol / 2:
        n = int(n * 1.25) + 1
    return n


def hq(q: int, x: float, tol: float = DEFAULT_TOL) -> float:
    """h_q(x) = prod_P (1 - x/|P|)^-1 (1 - 1/|P|)^x for real 0 <= x < q,
    via the certified log-series; relative error below ``tol``."""
    _check_x(q, x)
    n = _truncation(q, x, tol, hq_tail_bound)
    s = hq_series(q, n).log_value(x)
    s2 = hq_series(q, 2 * n).log_value(x)
    if abs(s2 - s) >= tol:
        raise AssertionError(f"h_q truncation self-check failed: q={q}, x={x}, N={n}")
    return math.exp(s)


def hq_log_derivative(q: int, x: float, tol: float = DEFAULT_TOL) -> float:
    """d/dx log h_q(x), by termwise differentiation of the log-series."""
    _check_x(q, x)
    n = _truncation(q, x, tol, hq_derivative_tail_bound)
    s = hq_series(q, n).log_derivative(x)
    s2 = hq_series(q, 2 * n).log_derivative(x)
    if abs(s2 - s) >= tol:
        raise AssertionError(f"h_q' truncation self-check failed: q={q}, x={x}, N={n}")
    return s


def hq_direct_product(q: int, x: float, d_max: int) -> float:
    """The Euler product for h_q(x) over all irreducibles of degree <= d_max.

    Every irreducible of degree d contributes the same factor, so the
    product is taken degree by degree with multiplicity pi_q(d).
    """
    _check_x(q, x)
    if d_max < 1:
        raise DomainError(f"d_max must be >= 1, got {d_max}")
    pi = prime_counts(q, d_max).counts
    total = []
    for d in range(1, d_max + 1):
        inv = float(q) ** -d
        total.append(pi[d] * (x * math.log1p(-inv) - math.log1p(-x * inv)))
    return math.exp(math.fsum(total))


def hq_direct_tail(q: int, x: float, d_max: int) -> float:
    """Bound on |log h_q(x) - log hq_direct_product(q, x, d_max)|.

    log of one degree-d factor is sum_{i>=2} q^(-di) (x^i - x) / i, and
    pi_q(d) <= q^d / d.
    """
    _check_x(q, x)
    D = d_max + 1
    inv = float(q) ** -D
    return (x * x + x) / (2 * D) * inv / ((1 - 1 / q) * (1 - max(x, 1.0) * inv))


# --- Gamma, Poisson, binomials ---


def gamma_real(x: float) -> float:
    if not x > 0:
        raise DomainError(f"gamma_real needs x > 0, got {x}")
    return math.gamma(x)


def poisson_pmf(lam: float, k: int) -> float:
    if not lam > 0:
        raise DomainError(f"Poisson mean must be > 0, got {lam}")
    if k < 0:
        return 0.0
    return math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))


def poisson_tail(lam: float, x: float) -> float:
    """P(X >= x) for X ~ Poisson(lam)."""
    k0 = max(0, math.ceil(x))
    if k0 <= lam:
        return 1.0 - math.fsum(poisson_pmf(lam, k) for k in range(k0))
    terms = []
    k = k0
    term = poisson_pmf(lam, k)
    # past the mode the terms decrease geometrically
    while term > 0.0 and (not terms or term > 1e-18 * terms[0]):
        terms.append(term)
        k += 1
        term *= lam / k
    return math.fsum(terms)


def poisson_tail_bound(lam: float, x: float) -> float:
    """(e lam / x)^x e^-lam, an upper bound on P(X >= x) for x > lam."""
    if not x > lam:
        raise DomainError(f"tail bound needs x > lambda, got x={x}, lambda={lam}")
    return math.exp(x * (1 + math.log(lam) - math.log(x)) - lam)


def binom_real(n: int, z: float) -> float:
    """C(n + z - 1, n) = prod_{j=1}^n (z + j - 1) / j for real z."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    sign = 1
    logs = []
    for j in range(1, n + 1):
        f = z + j - 1
        if f == 0:
            return 0.0
        if f < 0:
            sign = -sign
        logs.append(math.log(abs(f)) - math.log(j))
    return sign * math.exp(math.fsum(logs))


def binom_gamma_residual(n: int, z: float) -> float:
    """|C(n + z - 1, n) - n^(z-1) / Gamma(z)| for real 0 < z."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return abs(binom_real(n, z) - n ** (z - 1) / gamma_real(z))


# --- main terms ---


@dataclass(frozen=True)
class MainTermInputs:
    n: int
    k: int
    q: int
    r: float
    log_n: float

    @classmethod
    def build(cls, n: int, k: int, q: int = 2) -> "MainTermInputs":
        if n < 2:
            raise DomainError(f"n must be >= 2, got {n}")
        if not 1 <= k <= n:
            raise DomainError(f"k must lie in [1, n], got k={k}, n={n}")
        check_prime_power(q)
        log_n = math.log(n)
        return cls(n, k, q, (k - 1) / log_n, log_n)


def normalized_count(n: int, k: int) -> float:
    """r = (k - 1) / log n."""
    return MainTermInputs.build(n, k).r


def hwang_main_term(n: int, k: int) -> float:
    """(1/n) (log n)^(k-1) / (k-1)! / Gamma(r+1), evaluated in log space."""
    inp = MainTermInputs.build(n, k)
    if k == 1:
        return 1.0 / n
    return math.exp(-inp.log_n + (k - 1) * math.log(inp.log_n) - math.lgamma(k) - math.lgamma(inp.r + 1))


def warlimont_main_term(n: int, k: int, q: int, tol: float = DEFAULT_TOL) -> float:
    inp = MainTermInputs.build(n, k, q)
    return hwang_main_term(n, k) * hq(q, inp.r, tol)


def new_main_term(p_k: float, r: float, q: int, tol: float = DEFAULT_TOL) -> float:
    """P(K(pi_n) = k) h_q(r)."""
    return p_k * hq(q, r, tol)


def vanishing_coefficient_terms(n: int, k: int) -> tuple[float, float]:
    """Logs of the two parts of the z^(k-1) coefficient of (z - r) n^(z-1)
    (up to the common 1/n): (log n)^(k-2)/(k-2)! and r (log n)^(k-1)/(k-1)!.
    They coincide when r = (k-1)/log n."""
    if k < 2:
        raise DomainError(f"needs k >= 2, got {k}")
    inp = MainTermInputs.build(n, k)
    ll = math.log(inp.log_n)
    a = (k - 2) * ll - math.lgamma(k - 1)
    b = math.log(inp.r) + (k - 1) * ll - math.lgamma(k)
    return a, b
