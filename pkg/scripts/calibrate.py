"""Recompute the statistics behind the frozen bands in ffdist.verify.

Run once after a validated build; compare the printed maxima with the
constants and comments in verify.py.
"""

from __future__ import annotations

import math

from ffdist import analysis, verify
from ffdist.exact_dist import Mode


def main() -> None:
    sup, where = 0.0, None
    for q in (2, 3, 5):
        for n in (100, 300, 1000, 3000):
            for row in analysis.ratio_report(q, n, math.floor(1.5 * math.log(n))):
                if row.normalized > sup:
                    sup, where = row.normalized, (q, n, row.k)
    print(f"normalized ratio residual: max {sup:.4f} at {where}; frozen K0 = {verify.RATIO_K0}")

    env, where = verify.envelope_sup()
    print(f"envelope/(r+1)^(5r), r <= 1.5: max {env:.4f} at {where}; frozen = {verify.ENVELOPE_K0}")

    scaled = [r.scaled for r in analysis.tv_scaling_study((2, 3, 5, 7, 9), (100, 1000, 10**4), Mode.FLOAT)]
    print(f"d_TV q sqrt(log n): range [{min(scaled):.4f}, {max(scaled):.4f}]; frozen band {verify.TV_SCALED_BAND}")

    abt = [analysis.abt_bound_check(q, n, Mode.FLOAT).supremum for q in (2, 3, 5, 9) for n in (100, 1000, 10**4)]
    print(f"coupling-bound statistic: max {max(abt):.4f}; frozen band {verify.ABT_BAND}")

    worst_mean = worst_var = 0.0
    for n in (10**3, 10**4):
        for q in (2, 5):
            for row in analysis.distribution_pair(q, n, Mode.FLOAT):
                mean, var, _ = analysis.moments(row)
                worst_mean = max(worst_mean, abs(mean - math.log(n)))
                worst_var = max(worst_var, abs(var - math.log(n)))
    print(f"|mean - log n| max {worst_mean:.4f} (band {verify.MEAN_BAND}); "
          f"|var - log n| max {worst_var:.4f} (band {verify.VARIANCE_BAND})")


if __name__ == "__main__":
    main()
