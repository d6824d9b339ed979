"""Quartic and quadratic residue symbols in Z[i].

The quartic symbol at an odd prime p is defined by the Euler criterion
a^((N(p)-1)/4) mod p, with values in {0, 1, -1, i, -i}; the quadratic
symbol is its square.  Both are extended multiplicatively to composite
odd moduli, with value 1 at unit moduli.  For a non-primary odd modulus
the symbol is evaluated at its primary associate (the symbol is an
ideal-level object, so this choice is invisible at all call sites that
follow the primary-modulus convention).

Quartic values are Python complex numbers drawn from
{0, 1, -1, 1j, -1j}; quadratic values are ints in {-1, 0, 1}.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .gint import (
    Factorization,
    GaussianInt,
    IUNIT,
    ONE,
    divides,
    factor,
    modpow,
    residue_arrays,
    to_primary,
)

_UNIT_VALUES = {ONE: 1 + 0j, IUNIT: 1j, GaussianInt(-1, 0): -1 + 0j, GaussianInt(0, -1): -1j}


@lru_cache(maxsize=None)
def _factor_primary(n: GaussianInt) -> Factorization:
    return factor(n)


def quartic_prime(a: GaussianInt, prime: GaussianInt) -> complex:
    """Quartic symbol (a/prime)_4 at a prime of odd norm, by Euler's criterion."""
    nn = prime.norm()
    if nn == 2:
        raise ValueError("quartic symbol is undefined at the ramified prime")
    if (nn - 1) % 4 != 0:
        raise ValueError(f"norm {nn} is not 1 mod 4; modulus is not an odd prime power")
    if divides(prime, a):
        return 0j
    m = modpow(a, (nn - 1) // 4, prime)
    for u, val in _UNIT_VALUES.items():
        if divides(prime, m - u):
            return val
    raise ValueError(f"{prime} is not prime: Euler criterion found no root of unity")


def quadratic_prime(a: GaussianInt, prime: GaussianInt) -> int:
    """Quadratic symbol at a prime: a^((N-1)/2) mod prime, in {-1, 0, 1}.

    Equals quartic_prime(a, prime)**2; computed with a single modpow.
    """
    nn = prime.norm()
    if nn == 2:
        raise ValueError("quadratic symbol is undefined at the ramified prime")
    if divides(prime, a):
        return 0
    m = modpow(a, (nn - 1) // 2, prime)
    if divides(prime, m - ONE):
        return 1
    if divides(prime, m + ONE):
        return -1
    raise ValueError(f"{prime} is not prime: Euler criterion found no +/-1")


def _primary_factorization(n: GaussianInt) -> Factorization:
    if n.is_zero() or n.norm() % 2 == 0:
        raise ValueError("symbol modulus must have odd norm")
    _, p = to_primary(n)
    return _factor_primary(p)


def quartic_symbol(a: GaussianInt, n: GaussianInt) -> complex:
    """Quartic symbol (a/n)_4, extended multiplicatively; (a/1)_4 = 1."""
    fact = _primary_factorization(n)
    out = 1 + 0j
    for prime, e in fact.factors:
        v = quartic_prime(a, prime)
        if v == 0:
            return 0j
        out *= v ** (e % 4)
    return out


def quadratic_symbol(a: GaussianInt, n: GaussianInt) -> int:
    """Quadratic symbol (a/n) in {-1, 0, 1}; (a/1) = 1."""
    fact = _primary_factorization(n)
    out = 1
    for prime, e in fact.factors:
        v = quadratic_prime(a, prime)
        if v == 0:
            return 0
        if e % 2:
            out *= v
    return out


class QuadraticCharacter:
    """The map n -> (k/n), memoizing the factorisation work per modulus.

    The cache is only ever appended to, so concurrent readers are safe
    under the usual CPython dict guarantees.
    """

    def __init__(self, k: GaussianInt) -> None:
        self.k = k
        self._cache: dict[GaussianInt, int] = {}

    def __call__(self, n: GaussianInt) -> int:
        v = self._cache.get(n)
        if v is None:
            v = quadratic_symbol(self.k, n)
            self._cache[n] = v
        return v

    def __repr__(self) -> str:
        return f"QuadraticCharacter({self.k!r})"


def chi(k: GaussianInt) -> QuadraticCharacter:
    """Character factory: chi(k)(n) = (k/n)."""
    return QuadraticCharacter(k)


# ---------------------------------------------------------------------------
# Vectorised symbol tables for the hot summation paths
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _prime_symbol_table(prime: GaussianInt) -> tuple[np.ndarray, int]:
    """Dense table of (x/prime) over canonical residues, indexed by shifted coords."""
    rr, ri = residue_arrays(prime)
    off = int(max(np.abs(rr).max(), np.abs(ri).max())) + 1
    table = np.zeros((2 * off + 1, 2 * off + 1), dtype=np.int8)
    for a, b in zip(rr, ri):
        table[int(a) + off, int(b) + off] = quadratic_prime(
            GaussianInt(int(a), int(b)), prime
        )
    return table, off


class SymbolTable:
    """Evaluates (x/n) for arrays of x by table lookup.

    Built once per modulus n (any associate of an odd element); the
    construction factors n and combines per-prime Euler-criterion tables,
    so lookups cost a canonical reduction plus an index per prime.
    """

    def __init__(self, n: GaussianInt) -> None:
        self.n = n
        self.fact = _primary_factorization(n)

    def lookup(self, xr: np.ndarray, xi: np.ndarray) -> np.ndarray:
        out = np.ones(xr.shape, dtype=np.int8)
        from .gint import _reduce_arrays

        for prime, e in self.fact.factors:
            table, off = _prime_symbol_table(prime)
            rr, ri = _reduce_arrays(xr, xi, prime)
            v = table[rr + off, ri + off]
            if e % 2:
                out = out * v
            else:
                out = out * np.abs(v)
        return out

    def __call__(self, x: GaussianInt) -> int:
        xr = np.asarray([x.re], dtype=np.int64)
        xi = np.asarray([x.im], dtype=np.int64)
        return int(self.lookup(xr, xi)[0])
