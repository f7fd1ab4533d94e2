"""Exact and asymptotic laws of the number of prime factors of a random
monic polynomial over F_q, compared with the cycle count of a random
permutation."""

from .analysis import ratio_report, total_variation, tv_report, tv_scaling_study
from .asymptotics import hq, hwang_main_term, new_main_term, warlimont_main_term
from .errors import DomainError, FFDistError, ResourceError
from .exact_dist import (
    DistributionRow,
    Kind,
    Mode,
    omega_counts,
    omega_dist_float,
    omega_row,
    stirling_row,
    stirling_row_float,
)
from .prime_tab import prime_counts

__version__ = "0.1.0"

__all__ = [
    "DistributionRow",
    "DomainError",
    "FFDistError",
    "Kind",
    "Mode",
    "ResourceError",
    "hq",
    "hwang_main_term",
    "new_main_term",
    "omega_counts",
    "omega_dist_float",
    "omega_row",
    "prime_counts",
    "ratio_report",
    "stirling_row",
    "stirling_row_float",
    "total_variation",
    "tv_report",
    "tv_scaling_study",
    "warlimont_main_term",
]
