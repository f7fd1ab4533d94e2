from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffdist.errors import DomainError
from ffdist.fields import get_field
from ffdist.prime_tab import check_prime_power, divisors, is_prime_power, mobius, prime_counts


@pytest.mark.parametrize("m, mu", [(1, 1), (6, 1), (12, 0), (2, -1), (30, -1), (7, -1), (49, 0)])
def test_mobius_values(m, mu):
    assert mobius(m) == mu


def test_mobius_sums_to_zero_over_divisors():
    for m in range(2, 200):
        assert sum(mobius(d) for d in divisors(m)) == 0


def test_prime_power_examples():
    assert is_prime_power(9) == (3, 2)
    assert is_prime_power(16) == (2, 4)
    assert is_prime_power(12) is None
    assert is_prime_power(1) is None
    assert is_prime_power(7) == (7, 1)


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12, -4])
def test_check_prime_power_rejects(q):
    with pytest.raises(DomainError, match="q must be a prime power"):
        check_prime_power(q)


def test_counts_q2():
    assert list(prime_counts(2, 5).counts[1:]) == [2, 1, 2, 3, 6]
    assert prime_counts(2, 5).rows() == [(1, 2), (2, 1), (3, 2), (4, 3), (5, 6)]


def test_counts_q3_linear():
    assert prime_counts(3, 1)[1] == 3


def test_gauss_identity_q2_n4():
    t = prime_counts(2, 4)
    assert 1 * t[1] + 2 * t[2] + 4 * t[4] == 16


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27]), st.integers(1, 60))
def test_gauss_identity_property(q, n):
    t = prime_counts(q, n)
    assert sum(d * t[d] for d in divisors(n)) == q**n


@pytest.mark.parametrize("q, d_max", [(2, 10), (3, 6), (4, 5), (9, 4)])
def test_counts_match_sieve(q, d_max):
    F = get_field(q)
    t = prime_counts(q, d_max)
    assert [len(F.irreducibles_of_degree(d)) for d in range(1, d_max + 1)] == list(t.counts[1:])


def test_d_max_validation():
    with pytest.raises(DomainError):
        prime_counts(2, 0)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_counts_match_enumeration(q):
    from ffdist.exact_dist import enumerate_irreducibles

    d_max = 1
    while d_max < 8 and q ** (d_max + 1) <= 10**6:
        d_max += 1
    irr = enumerate_irreducibles(q, d_max)
    assert [irr.count(d) for d in range(1, d_max + 1)] == list(prime_counts(q, d_max).counts[1:])


@pytest.mark.parametrize("q", [2, 3, 4, 9, 16])
def test_first_order_count_bound(q):
    t = prime_counts(q, 120)
    for n in range(1, 121):
        assert abs(n * t[n] - q**n) <= 2 * q ** (n // 2)
