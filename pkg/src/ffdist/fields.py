"""Arithmetic in F_q and in F_q[T], sized for brute-force enumeration.

Field elements are encoded as integers in ``[0, q)``: the base-``p`` digits of
the code are the coefficients (lowest first) of a residue modulo a fixed
irreducible ``g`` over F_p.  Polynomials in F_q[T] are tuples of such codes,
lowest degree first.  A monic polynomial of degree ``m`` is also identified
with the integer ``sum(c_i * q**i for i < m)`` built from its lower
coefficients; the vectorised sieve below works entirely on those indices.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError, ResourceError
from .prime_tab import check_prime_power

# Beyond this q the q*q lookup tables stop being cheap.
MAX_TABLE_Q = 1 << 12
_BLOCK_ROWS = 1 << 17


def _digits(x: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        x, r = divmod(x, base)
        out.append(r)
    return out


def _prime_poly_mulmod(a: list[int], b: list[int], g: list[int], p: int) -> list[int]:
    e = len(g) - 1
    prod = [0] * (2 * e - 1 if e > 0 else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # g is monic: reduce from the top
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for t in range(e + 1):
                prod[k - e + t] = (prod[k - e + t] - c * g[t]) % p
    return prod[:e]


def _smallest_irreducible_over_prime(p: int, e: int) -> list[int]:
    """Monic irreducible of degree ``e`` over F_p with the smallest index.

    The index of ``c_0 + c_1 T + ... + T^e`` is ``sum(c_i p**i)``; candidates
    are scanned in increasing index and rejected if they have a monic factor
    of degree <= e/2 (plain trial division over F_p).
    """
    prime_field = GF(p)
    small: list[tuple[int, ...]] = []
    for d in range(1, e // 2 + 1):
        small.extend(prime_field.irreducibles_of_degree(d))
    for idx in range(p**e):
        cand = tuple(_digits(idx, p, e)) + (1,)
        if all(any(prime_field.poly_divmod(cand, f)[1]) for f in small):
            return list(cand)
    raise AssertionError("no irreducible found")  # cannot happen


class GF:
    """The finite field with ``q`` elements, with full lookup tables."""

    def __init__(self, q: int):
        p, e = check_prime_power(q)
        if q > MAX_TABLE_Q:
            raise ResourceError(f"field tables capped at q <= {MAX_TABLE_Q}")
        self.q, self.p, self.e = q, p, e
        codes = np.arange(q)
        if e == 1:
            self.modulus: tuple[int, ...] = (0, 1)
            self.add = ((codes[:, None] + codes[None, :]) % p).astype(np.int64)
            self.mul = ((codes[:, None] * codes[None, :]) % p).astype(np.int64)
        else:
            g = _smallest_irreducible_over_prime(p, e)
            self.modulus = tuple(g)
            vecs = [_digits(c, p, e) for c in range(q)]
            weights = [p**i for i in range(e)]
            add = np.zeros((q, q), dtype=np.int64)
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    s = sum(((x + y) % p) * w for x, y, w in zip(vecs[a], vecs[b], weights))
                    m = sum(c * w for c, w in zip(_prime_poly_mulmod(vecs[a], vecs[b], g, p), weights))
                    add[a, b] = add[b, a] = s
                    mul[a, b] = mul[b, a] = m
            self.add, self.mul = add, mul
        self.neg = np.array([int(np.flatnonzero(self.add[a] == 0)[0]) for a in range(q)])
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(self.mul[a] == 1)[0])
        self._irreducibles: dict[int, list[tuple[int, ...]]] = {}

    def __repr__(self) -> str:
        return f"GF({self.q})"

    # --- scalar polynomial arithmetic (used for trial division) ---

    def poly_divmod(self, f: tuple[int, ...], g: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Long division ``f = quot*g + rem``; ``g`` must have a nonzero leading coefficient."""
        add, mul, neg = self.add, self.mul, self.neg
        rem = list(f)
        dg = len(g) - 1
        lead_inv = int(self.inv[g[-1]])
        if len(rem) - 1 < dg:
            return (0,), tuple(rem)
        quot = [0] * (len(rem) - dg)
        for k in range(len(rem) - 1, dg - 1, -1):
            c = rem[k]
            if c:
                c = int(mul[c, lead_inv])
                quot[k - dg] = c
                nc = int(neg[c])
                for t in range(dg + 1):
                    if g[t]:
                        rem[k - dg + t] = int(add[rem[k - dg + t], mul[nc, g[t]]])
        rem = rem[:dg] if dg > 0 else [0]
        return tuple(quot), tuple(rem)

    def poly_mul(self, f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] = int(self.add[out[i + j], self.mul[a, b]])
        return tuple(out)

    def factor(self, f: tuple[int, ...], irreducibles: list[tuple[int, ...]]) -> list[tuple[tuple[int, ...], int]]:
        """Factor monic ``f`` by trial division against ``irreducibles``.

        ``irreducibles`` must contain every monic irreducible of degree up to
        ``deg(f)/2``, sorted by degree.  The cofactor left after trial
        division is irreducible (or 1) and is reported with multiplicity 1.
        """
        if f[-1] != 1:
            raise DomainError("factor expects a monic polynomial")
        out = []
        rest = tuple(f)
        for P in irreducibles:
            dp = len(P) - 1
            if 2 * dp > len(rest) - 1:
                break
            mult = 0
            while len(rest) - 1 >= dp:
                quot, rem = self.poly_divmod(rest, P)
                if any(rem):
                    break
                rest = quot
                mult += 1
            if mult:
                out.append((P, mult))
        if len(rest) > 1:
            out.append((rest, 1))
        return out

    # --- vectorised enumeration over all monic polynomials of one degree ---

    def monic_digits(self, m: int) -> np.ndarray:
        """Coefficient matrix of all monic degree-``m`` polynomials, one row
        per index, columns ``c_0 .. c_m`` (last column is the leading 1)."""
        count = self.q**m
        idx = np.arange(count, dtype=np.int64)
        out = np.empty((count, m + 1), dtype=np.int64)
        for i in range(m):
            idx, out[:, i] = np.divmod(idx, self.q)
        out[:, m] = 1
        return out

    def product_indices(self, factors: np.ndarray, m: int) -> np.ndarray:
        """Indices of ``P*g`` for every row ``P`` of ``factors`` (monic,
        degree ``e``) and every monic ``g`` of degree ``m - e``.

        Result has shape ``(len(factors), q**(m-e))``.
        """
        e = factors.shape[1] - 1
        G = self.monic_digits(m - e).astype(np.int32)
        nf, ng = factors.shape[0], G.shape[0]
        add, mul = self.add.astype(np.int32), self.mul.astype(np.int32)
        weights = self.q ** np.arange(m, dtype=np.int64)
        width = m - e + 1
        out = np.empty((nf, ng), dtype=np.int64)
        step = max(1, _BLOCK_ROWS // ng)
        for lo in range(0, nf, step):
            block = factors[lo : lo + step]
            prod = np.zeros((block.shape[0], ng, m + 1), dtype=np.int32)
            for j in range(e + 1):
                terms = mul[block[:, j][:, None, None], G[None, :, :]]
                prod[:, :, j : j + width] = add[prod[:, :, j : j + width], terms]
            out[lo : lo + step] = prod[:, :, :m] @ weights
        return out

    def irreducibles_of_degree(self, d: int) -> list[tuple[int, ...]]:
        """All monic irreducibles of degree ``d`` in increasing index order,
        by sieving out products of lower-degree irreducibles."""
        if d in self._irreducibles:
            return self._irreducibles[d]
        reducible = np.zeros(self.q**d, dtype=bool)
        for e in range(1, d // 2 + 1):
            low = self.irreducibles_of_degree(e)
            idx = self.product_indices(np.array(low, dtype=np.int64), d)
            reducible[idx.ravel()] = True
        found = np.flatnonzero(~reducible)
        polys = [tuple(_digits(int(i), self.q, d)) + (1,) for i in found]
        self._irreducibles[d] = polys
        return polys


@lru_cache(maxsize=32)
def get_field(q: int) -> GF:
    return GF(q)


def index_of(poly: tuple[int, ...], q: int) -> int:
    return sum(c * q**i for i, c in enumerate(poly[:-1]))


def poly_from_index(idx: int, q: int, m: int) -> tuple[int, ...]:
    return tuple(_digits(idx, q, m)) + (1,)


def omega_arrays(field: GF, n: int) -> list[np.ndarray]:
    """``out[m][i]`` is Omega of the monic degree-``m`` polynomial with index ``i``.

    Omega is completely additive, so every ``f = P*g`` with ``P`` irreducible
    gets ``Omega(g) + 1``; whatever is never hit by such a product is
    irreducible.
    """
    if field.q**n > 50_000_000:
        raise ResourceError(f"q**n = {field.q**n} too large to enumerate")
    out = [np.zeros(1, dtype=np.int16)]
    for m in range(1, n + 1):
        om = np.zeros(field.q**m, dtype=np.int16)
        for e in range(1, m // 2 + 1):
            low = np.array(field.irreducibles_of_degree(e), dtype=np.int64)
            idx = field.product_indices(low, m)
            om[idx] = out[m - e][None, :] + 1
        om[om == 0] = 1
        out.append(om)
    return out
