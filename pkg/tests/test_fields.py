from __future__ import annotations

import itertools

import numpy as np
import pytest

from ffdist.errors import DomainError, ResourceError
from ffdist.fields import get_field, index_of, omega_arrays, poly_from_index


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_field_axioms(q):
    F = get_field(q)
    add, mul = F.add, F.mul
    codes = range(q)
    for a, b, c in itertools.product(codes, repeat=3):
        assert mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]
        assert add[a, add[b, c]] == add[add[a, b], c]
        assert mul[a, mul[b, c]] == mul[mul[a, b], c]
    for a in codes:
        assert add[a, F.neg[a]] == 0
        if a:
            assert mul[a, F.inv[a]] == 1
    # characteristic p
    for a in codes:
        s = 0
        for _ in range(F.p):
            s = add[s, a]
        assert s == 0


@pytest.mark.parametrize("q, modulus", [(4, (1, 1, 1)), (8, (1, 1, 0, 1)), (9, (1, 0, 1)), (16, (1, 1, 0, 0, 1))])
def test_modulus_is_smallest_index_irreducible(q, modulus):
    assert get_field(q).modulus == modulus


def test_non_prime_power_rejected():
    with pytest.raises(DomainError):
        get_field(6)


def test_large_field_tables_capped():
    with pytest.raises(ResourceError):
        get_field(8192)


def test_irreducible_examples():
    F = get_field(2)
    assert F.irreducibles_of_degree(1) == [(0, 1), (1, 1)]
    assert F.irreducibles_of_degree(2) == [(1, 1, 1)]
    assert len(get_field(3).irreducibles_of_degree(1)) == 3


def test_index_roundtrip():
    for q, m in [(2, 5), (9, 3)]:
        for i in range(q**m):
            assert index_of(poly_from_index(i, q, m), q) == i


@pytest.mark.parametrize("q, m", [(2, 8), (3, 5), (4, 4), (9, 3)])
def test_trial_division_agrees_with_sieve(q, m):
    """Omega from explicit trial division equals the multiplication sieve."""
    F = get_field(q)
    irr = [P for d in range(1, m // 2 + 1) for P in F.irreducibles_of_degree(d)]
    sieve = omega_arrays(F, m)[m]
    for i in range(q**m):
        f = poly_from_index(i, q, m)
        fac = F.factor(f, irr)
        assert sum(mult for _, mult in fac) == sieve[i]
        prod = (1,)
        for P, mult in fac:
            for _ in range(mult):
                prod = F.poly_mul(prod, P)
        assert prod == f


def test_factor_rejects_non_monic():
    F = get_field(3)
    with pytest.raises(DomainError):
        F.factor((1, 2), [])


def test_poly_divmod_identity():
    F = get_field(5)
    rng = np.random.default_rng(0)
    for _ in range(50):
        f = tuple(int(c) for c in rng.integers(0, 5, 6)) + (1,)
        g = tuple(int(c) for c in rng.integers(0, 5, 3)) + (1,)
        quot, rem = F.poly_divmod(f, g)
        back = list(F.poly_mul(quot, g))
        for i, c in enumerate(rem):
            back[i] = int(F.add[back[i], c])
        assert tuple(back) == f


def test_omega_arrays_budget():
    with pytest.raises(ResourceError):
        omega_arrays(get_field(2), 30)
