"""Invariant and acceptance checks, shared by ``ffdist verify`` and the test
suite.

Every O(.) or Theta(.) statement with an unknown absolute constant is
checked against an empirical band.  Bands were computed once with
``scripts/calibrate.py`` and frozen here; a later run outside them is a
regression.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from . import analysis
from .asymptotics import (
    binom_gamma_residual,
    hq,
    hq_direct_product,
    hq_direct_tail,
    poisson_tail,
    poisson_tail_bound,
    vanishing_coefficient_terms,
)
from .exact_dist import (
    Mode,
    brute_force_omega,
    omega_counts,
    omega_dist_float,
    omega_row,
    stirling_numbers,
    stirling_row,
    stirling_row_float,
)
from .prime_tab import prime_counts

# sup_{k <= 1.5 log n} |ratio - h_q(r)| q (log n)^2 / k over q in {2,3,5},
# n in {100, 300, 1000, 3000}; calibrated max 3.81 (q=2, n=3000)
RATIO_K0 = 5.0
RATIO_K0_CEILING = 50.0
# d_TV q sqrt(log n)
TV_SCALED_BAND = (0.05, 5.0)
# |ratio - 1| q (log n - k) / k for k < log n; calibrated max 0.35 (q=2, n=1e4)
ABT_BAND = 0.5
# envelope / (r+1)^(5r) for r <= 3/2 over the pointwise-ratio grid; calibrated max 0.33
ENVELOPE_K0 = 0.5
# floor for h_q on [0, 1]; the lemma only promises some absolute c > 0
HQ_FLOOR = 0.25
MEAN_BAND = 2.0
VARIANCE_BAND = 3.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _timed(name, fn, *args, **kwargs) -> CheckResult:
    t0 = time.perf_counter()
    passed, detail = fn(*args, **kwargs)
    return CheckResult(name, bool(passed), detail, time.perf_counter() - t0)


# --- 1. Euler product against brute force ---


def oracle_equivalence(qs=(2, 3, 4, 5, 7, 8, 9), budget=2 * 10**6):
    bad, cells = [], 0
    for q in qs:
        n = int(math.floor(math.log(budget) / math.log(q) + 1e-12))
        while q ** (n + 1) <= budget:
            n += 1
        while q**n > budget:
            n -= 1
        brute = brute_force_omega(q, n, budget=budget)
        euler = omega_counts(q, n)
        for m in range(1, n + 1):
            cells += 1
            if brute.counts[m] != euler.counts[m]:
                bad.append((q, m))
    return not bad, f"{cells} (q,n) cells compared, mismatches: {bad or 'none'}"


# --- 2. exact structural identities ---


def structural_identities(n_max=300, qs=(2, 3, 5)):
    bad = []
    for q in qs:
        table = omega_counts(q, n_max)
        pi = prime_counts(q, n_max).counts
        for m in range(1, n_max + 1):
            row = table.counts[m]
            if sum(row) != q**m:
                bad.append(("total", q, m))
            if row[1] != pi[m]:
                bad.append(("pi", q, m))
            if row[m] != comb(q + m - 1, m):
                bad.append(("k=n", q, m))
    for n in range(1, n_max + 1):
        s = stirling_numbers(n)
        if sum(s) != factorial(n):
            bad.append(("stirling sum", n))
        if sum(v << k for k, v in enumerate(s)) != factorial(n + 1):
            bad.append(("E 2^K", n))
    return not bad, f"n <= {n_max}, q in {list(qs)}: violations {bad[:5] or 'none'}"


# --- 3. exact vs float ---


def exact_float_agreement(n_max=200, qs=(2, 3, 5), tol=1e-12):
    worst = 0.0
    for n in range(1, n_max + 1):
        worst = max(worst, float(np.abs(stirling_row(n).as_float() - stirling_row_float(n).as_float()).max()))
        for q in qs:
            diff = np.abs(omega_row(q, n).as_float() - omega_dist_float(q, n).as_float()).max()
            worst = max(worst, float(diff))
    return worst <= tol, f"max |exact - float| = {worst:.3e} (tol {tol:g})"


# --- 4. h_q ---


def hq_certification(qs=(2, 3, 5), xs=(0.25, 0.5, 1.0, 1.5), size_qs=(2, 3, 5, 9), grid=50):
    worst_excess = -math.inf
    for q in qs:
        for x in xs:
            if x >= q:
                continue
            series = hq(q, x)
            direct = hq_direct_product(q, x, 30)
            allowed = 1e-9 + direct * math.expm1(hq_direct_tail(q, x, 30))
            worst_excess = max(worst_excess, abs(series - direct) - allowed)
    at_one = max(abs(hq(q, 1.0) - 1.0) for q in size_qs)
    lower_fail = []
    for q in size_qs:
        for x in np.linspace(1.0, 0.9 * q, grid):
            if hq(q, float(x)) < 1 + (x - 1) / (2 * q):
                lower_fail.append((q, float(x)))
    ok = worst_excess <= 0 and at_one <= 1e-12 and not lower_fail
    return ok, (
        f"series vs product excess {worst_excess:.2e}; |h_q(1)-1| max {at_one:.1e}; "
        f"lower-bound failures {lower_fail or 'none'}"
    )


# --- 5. pointwise ratio ---


def pointwise_ratio(qs=(2, 3, 5), ns=(100, 300, 1000, 3000), k0=RATIO_K0):
    sup = 0.0
    where = None
    for q in qs:
        for n in ns:
            kmax = math.floor(1.5 * math.log(n))
            for row in analysis.ratio_report(q, n, kmax):
                if row.normalized > sup:
                    sup, where = row.normalized, (q, n, row.k)
    q = 2
    first, last = (analysis.ratio_report(q, n, round(math.log(n)) + 1)[-1].residual for n in (ns[0], ns[-1]))
    drop = 1 - last / first
    ok = sup <= k0 <= RATIO_K0_CEILING and drop >= 0.25
    return ok, f"sup normalized = {sup:.4f} at {where} (K0 {k0}); residual drop n={ns[0]}->{ns[-1]}: {drop:.1%}"


# --- 6. TV scaling ---


def tv_scaling(qs=(2, 3, 5, 7, 9), ns=(100, 1000, 10**4), identity_n=50, threads=1):
    lo, hi = TV_SCALED_BAND
    reports = analysis.tv_scaling_study(qs, ns, Mode.FLOAT, threads=threads)
    outside = [(r.q, r.n, round(r.scaled, 4)) for r in reports if not lo <= r.scaled <= hi]
    scaled = [r.scaled for r in reports]
    bad_identity = []
    for q in qs:
        for n in range(1, identity_n + 1):
            gap, closed, lower = analysis.k_equals_n_gap(q, n)
            if gap != closed or (n >= 2 and gap < lower):
                bad_identity.append((q, n))
    ok = not outside and not bad_identity
    return ok, (
        f"scaled in [{min(scaled):.4f}, {max(scaled):.4f}] (band {TV_SCALED_BAND}), outside: {outside or 'none'}; "
        f"k=n identity failures: {bad_identity or 'none'}"
    )


# --- 7. decomposition ---


def decomposition_sum(exact_cells=((2, 50), (3, 100), (9, 400)), float_cells=((2, 10**4), (9, 10**4))):
    bad = []
    for q, n in exact_cells:
        r = analysis.tv_report(q, n, Mode.EXACT)
        if r.s1 + r.s2 + r.s3 != 2 * r.d_tv:
            bad.append((q, n, "exact"))
    worst = 0.0
    for q, n in float_cells:
        r = analysis.tv_report(q, n, Mode.FLOAT)
        worst = max(worst, abs(r.s1 + r.s2 + r.s3 - 2 * r.d_tv))
    ok = not bad and worst <= 1e-10
    return ok, f"exact mismatches {bad or 'none'}; float max |S1+S2+S3-2 d_TV| = {worst:.2e}"


def decomposition_dominance(q=9, n=10**4, factor=0.2):
    r = analysis.tv_report(q, n, Mode.FLOAT)
    ok = r.s2 <= factor * r.s1 and r.s3 <= factor * r.s1
    return ok, f"(q,n)=({q},{n}): S1={r.s1:.6g} S2={r.s2:.6g} ({r.s2 / r.s1:.3f} S1) S3={r.s3:.3g} ({r.s3 / r.s1:.2e} S1); need <= {factor} S1"


# --- 8. lemma-level checks ---


def lemma_checks():
    notes = []
    poisson_fail = []
    for lam in (0.5, 1.0, 5.0, 20.0):
        for x in np.linspace(lam, 4 * lam, 41)[1:]:
            if poisson_tail(lam, x) > poisson_tail_bound(lam, x):
                poisson_fail.append((lam, float(x)))
    notes.append(f"poisson failures {poisson_fail or 'none'}")
    binom_fail = []
    for z in (0.5, 1.0, 2.0, 3.0):
        scaled = [binom_gamma_residual(n, z) * n ** (2 - z) for n in (10, 100, 1000)]
        for a, b in zip(scaled, scaled[1:]):
            if a == 0 and b == 0:
                continue
            if a == 0 or b == 0 or not 1 / 3 <= b / a <= 3:
                binom_fail.append((z, scaled))
                break
    notes.append(f"binomial failures {binom_fail or 'none'}")
    worst = 0.0
    for k in (2, 5, 20):
        for n in (30, 10**3):
            a, b = vanishing_coefficient_terms(n, k)
            worst = max(worst, abs(math.expm1(b - a)))
    notes.append(f"vanishing coefficient max rel {worst:.1e}")
    return not poisson_fail and not binom_fail and worst <= 1e-14, "; ".join(notes)


# --- 9. moments ---


def moment_bands(ns=(10**3, 10**4), qs=(2, 5)):
    worst_mean = worst_var = 0.0
    for n in ns:
        log_n = math.log(n)
        for q in qs:
            for row in analysis.distribution_pair(q, n, Mode.FLOAT):
                mean, var, _ = analysis.moments(row)
                worst_mean = max(worst_mean, abs(mean - log_n))
                worst_var = max(worst_var, abs(var - log_n))
    ok = worst_mean <= MEAN_BAND and worst_var <= VARIANCE_BAND
    return ok, f"max |mean - log n| = {worst_mean:.3f} (<= {MEAN_BAND}); max |var - log n| = {worst_var:.3f} (<= {VARIANCE_BAND})"


ACCEPTANCE = {
    "1 oracle equivalence": (oracle_equivalence, {}),
    "2 structural identities": (structural_identities, {}),
    "3 exact/float agreement": (exact_float_agreement, {}),
    "4 h_q certification": (hq_certification, {}),
    "5 pointwise ratio": (pointwise_ratio, {}),
    "6 tv scaling": (tv_scaling, {}),
    "7a decomposition sum": (decomposition_sum, {}),
    "7b decomposition dominance": (decomposition_dominance, {}),
    "8 lemma checks": (lemma_checks, {}),
    "9 moments": (moment_bands, {}),
}

FAST = {
    "1 oracle equivalence": (oracle_equivalence, {"budget": 5000}),
    "2 structural identities": (structural_identities, {"n_max": 60}),
    "3 exact/float agreement": (exact_float_agreement, {"n_max": 40}),
    "4 h_q certification": (hq_certification, {"grid": 8}),
    "5 pointwise ratio": (pointwise_ratio, {"qs": (2,), "ns": (100, 3000)}),
    "6 tv scaling": (tv_scaling, {"ns": (100, 1000), "identity_n": 20}),
    "7a decomposition sum": (decomposition_sum, {"exact_cells": ((2, 50), (9, 100)), "float_cells": ((9, 1000),)}),
    "8 lemma checks": (lemma_checks, {}),
    "9 moments": (moment_bands, {"ns": (10**3,)}),
}


def run_check(name: str, suite: str = "all") -> CheckResult:
    fn, kwargs = (ACCEPTANCE if suite == "all" else FAST)[name]
    return _timed(name, fn, **kwargs)


def run_suite(suite: str = "fast") -> list[CheckResult]:
    if suite not in ("fast", "all"):
        raise ValueError(f"unknown suite {suite!r}")
    table = ACCEPTANCE if suite == "all" else FAST
    return [run_check(name, suite) for name in table]


def envelope_sup(qs=(2, 3, 5), ns=(100, 300, 1000, 3000)) -> tuple[float, tuple]:
    """sup of envelope / (r+1)^(5r) over k with r <= 3/2."""
    best, where = 0.0, None
    for q in qs:
        for n in ns:
            for row in analysis.ratio_report(q, n, math.floor(1.5 * math.log(n)) + 1):
                if row.envelope is None or row.r > 1.5:
                    continue
                v = row.envelope / (row.r + 1) ** (5 * row.r)
                if v > best:
                    best, where = v, (q, n, row.k)
    return best, where


def fraction_or_float(x):
    return x if isinstance(x, Fraction) else float(x)
