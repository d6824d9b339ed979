"""Quadratic Gauss sums g2(r, n) for primary moduli.

Two evaluation routes:

* ``g2_naive`` sums the defining character sum over a canonical residue
  system, with phases reduced mod 1 in exact integer arithmetic before
  exponentiation.
* ``g2_closed`` multiplies the exact prime-power values: for p^l || n
  and p^h || r (h infinite when r = 0) the local value is 0 for odd
  l <= h, phi(p^l) for even l <= h, -N(p)^(l-1) when l = h+1 is even,
  (i r p^(-h) / p) N(p)^(l-1/2) when l = h+1 is odd, and 0 for
  l >= h+2.  Products are carried as exact ``SurdValue``s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .gint import (
    Factorization,
    GaussianInt,
    IUNIT,
    SurdValue,
    _round_half_up,
    divides,
    exact_div,
    factor,
    is_primary,
    residue_arrays,
)
from .symbols import SymbolTable, _prime_symbol_table, quadratic_prime

_INT64_GUARD = 1 << 62


@dataclass(frozen=True)
class GaussSumValue:
    """A Gauss sum as exact surd (when available) plus float rendering."""

    exact: Optional[SurdValue]
    value: float

    def __post_init__(self) -> None:
        if self.exact is not None:
            ref = self.exact.to_float()
            if abs(self.value - ref) > 1e-9 * max(1.0, abs(ref)):
                raise AssertionError("float rendering disagrees with exact surd")


def e_tilde(num: GaussianInt, den: int) -> complex:
    """exp(2*pi*i*Im(num/den)) with the phase reduced mod 1 exactly."""
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if den < 0:
        num, den = -num, -den
    j = num.im % den
    angle = 2.0 * math.pi * (j / den)
    return complex(math.cos(angle), math.sin(angle))


@lru_cache(maxsize=None)
def _phase_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    j = np.arange(n, dtype=np.float64) * (2.0 * math.pi / n)
    return np.cos(j), np.sin(j)


def g2_naive(
    r: GaussianInt, n: GaussianInt, residue_bound: int = 10**6
) -> GaussSumValue:
    """Brute-force g2(r, n) over the canonical residue system (float only).

    The imaginary part must vanish to within 1e-6 * N(n) (Gauss sums at
    primary moduli are real); it is asserted and discarded.
    """
    if not is_primary(n):
        raise ValueError("g2 is defined for primary moduli")
    nn = n.norm()
    xr, xi = residue_arrays(n, residue_bound)
    sym = SymbolTable(n).lookup(xr, xi)
    peak = (abs(r.re) + abs(r.im)) * (int(np.abs(xr).max(initial=0)) + int(np.abs(xi).max(initial=0)) + 1)
    if peak * (abs(n.re) + abs(n.im) + 1) * 2 >= _INT64_GUARD:
        raise OverflowError("phase computation would overflow int64")
    vr = r.re * xr - r.im * xi
    vi = r.re * xi + r.im * xr
    j = (vi * n.re - vr * n.im) % nn
    cos_t, sin_t = _phase_tables(nn)
    real = float(np.sum(sym * cos_t[j]))
    imag = float(np.sum(sym * sin_t[j]))
    if abs(imag) > 1e-6 * nn:
        raise AssertionError(f"g2({r}, {n}) has imaginary part {imag}")
    return GaussSumValue(exact=None, value=real)


def g2_naive_many(
    ks: list[GaussianInt], n: GaussianInt, residue_bound: int = 10**6
) -> list[float]:
    """g2_naive for several k at one modulus, sharing the residue/symbol work."""
    if not is_primary(n):
        raise ValueError("g2 is defined for primary moduli")
    nn = n.norm()
    xr, xi = residue_arrays(n, residue_bound)
    sym = SymbolTable(n).lookup(xr, xi)
    cos_t, sin_t = _phase_tables(nn)
    xmax = int(np.abs(xr).max(initial=0)) + int(np.abs(xi).max(initial=0)) + 1
    out = []
    for r in ks:
        if (abs(r.re) + abs(r.im)) * xmax * (abs(n.re) + abs(n.im) + 1) * 2 >= _INT64_GUARD:
            raise OverflowError("phase computation would overflow int64")
        vr = r.re * xr - r.im * xi
        vi = r.re * xi + r.im * xr
        j = (vi * n.re - vr * n.im) % nn
        real = float(np.sum(sym * cos_t[j]))
        imag = float(np.sum(sym * sin_t[j]))
        if abs(imag) > 1e-6 * nn:
            raise AssertionError(f"g2({r}, {n}) has imaginary part {imag}")
        out.append(real)
    return out


def phi_factored(fact: Factorization) -> int:
    """Euler phi from a factorisation: prod N(p)^(l-1) (N(p) - 1)."""
    out = 1
    if fact.ramified_exp:
        out *= 2**fact.ramified_exp - 2 ** (fact.ramified_exp - 1)
    for prime, e in fact.factors:
        np_ = prime.norm()
        out *= np_ ** (e - 1) * (np_ - 1)
    return out


def phi(n: GaussianInt) -> int:
    """Number of units in Z[i]/(n)."""
    if n.is_zero():
        raise ValueError("phi(0) is undefined")
    return phi_factored(factor(n))


def _ord_at(prime: GaussianInt, k: GaussianInt) -> tuple[int, GaussianInt]:
    """Largest h with prime^h | k (k != 0), and k / prime^h."""
    h = 0
    while divides(prime, k):
        k = exact_div(k, prime)
        h += 1
    return h, k


def _g2_local(prime: GaussianInt, l: int, r: Optional[GaussianInt]) -> SurdValue:
    """Exact g2(r, prime^l); r = None encodes r = 0 (h = infinity)."""
    np_ = prime.norm()
    if r is None:
        if l % 2:
            return SurdValue(0, 1)
        return SurdValue.from_int(np_ ** (l - 1) * (np_ - 1))
    h, reduced = _ord_at(prime, r)
    if l <= h:
        if l % 2:
            return SurdValue(0, 1)
        return SurdValue.from_int(np_ ** (l - 1) * (np_ - 1))
    if l == h + 1:
        if l % 2 == 0:
            return SurdValue.from_int(-(np_ ** (l - 1)))
        s = quadratic_prime(IUNIT * reduced, prime)
        return SurdValue.sqrt_of(np_).scale(s * np_ ** (l - 1))
    return SurdValue(0, 1)


@lru_cache(maxsize=None)
def _factor_memo(n: GaussianInt) -> Factorization:
    return factor(n)


def g2_closed(r: GaussianInt, n: GaussianInt) -> GaussSumValue:
    """Exact g2(r, n) via the prime-power closed form; r = 0 allowed."""
    if not is_primary(n):
        raise ValueError("g2 is defined for primary moduli")
    fact = _factor_memo(n)
    acc = SurdValue.from_int(1)
    rr: Optional[GaussianInt] = None if r.is_zero() else r
    for prime, l in fact.factors:
        acc = acc * _g2_local(prime, l, rr)
        if acc.is_zero():
            break
    return GaussSumValue(exact=acc, value=acc.to_float())


class G2Evaluator:
    """Fast float g2(k, n) for one fixed primary n and many k.

    Precomputes the factorisation of n and per-prime symbol tables; each
    call walks the prime powers of n, extracting ord_p(k) by exact
    division and looking the boundary symbol up in the dense table.
    ``eval_many`` is the vectorised form over coordinate arrays.
    """

    def __init__(self, n: GaussianInt) -> None:
        if not is_primary(n):
            raise ValueError("g2 is defined for primary moduli")
        self.n = n
        self.fact = _factor_memo(n)
        self._locals = []
        zero_val = 1
        for prime, l in self.fact.factors:
            np_ = prime.norm()
            table, off = _prime_symbol_table(prime)
            self._locals.append((prime, l, np_, table, off))
            zero_val = 0 if (zero_val == 0 or l % 2) else zero_val * np_ ** (l - 1) * (np_ - 1)
        self.zero_value = float(zero_val)

    def eval_many(self, kr: np.ndarray, ki: np.ndarray) -> np.ndarray:
        """g2(k, n) for arrays of nonzero k, as float64."""
        from .gint import _reduce_arrays

        out = np.ones(kr.shape, dtype=np.float64)
        for prime, l, np_, table, off in self._locals:
            pre, pim = prime.re, prime.im
            cur_r = kr.copy()
            cur_i = ki.copy()
            h = np.zeros(kr.shape, dtype=np.int64)
            active = np.ones(kr.shape, dtype=bool)
            while True:
                tr = cur_r * pre + cur_i * pim
                ti = cur_i * pre - cur_r * pim
                div = active & (tr % np_ == 0) & (ti % np_ == 0)
                if not div.any():
                    break
                cur_r = np.where(div, tr // np_, cur_r)
                cur_i = np.where(div, ti // np_, cur_i)
                h = h + div
                active = div & (h < l)
                if not active.any():
                    break
            val = np.zeros(kr.shape, dtype=np.float64)
            if l % 2 == 0:
                val[h >= l] = float(np_ ** (l - 1) * (np_ - 1))
                val[h == l - 1] = float(-(np_ ** (l - 1)))
            else:
                bnd = h == l - 1
                if bnd.any():
                    ir = -cur_i[bnd]
                    ii = cur_r[bnd]
                    rr, rj = _reduce_arrays(ir, ii, prime)
                    s = table[rr + off, rj + off].astype(np.float64)
                    val[bnd] = s * (np_ ** (l - 1) * math.sqrt(np_))
            out = out * val
            if not out.any():
                break
        return out

    def __call__(self, k: GaussianInt) -> float:
        if k.is_zero():
            return self.zero_value
        a, b = 1, 1
        for prime, l, np_, table, off in self._locals:
            h, reduced = _ord_at(prime, k)
            if l <= h:
                if l % 2:
                    return 0.0
                a *= np_ ** (l - 1) * (np_ - 1)
            elif l == h + 1:
                if l % 2 == 0:
                    a *= -(np_ ** (l - 1))
                else:
                    x = IUNIT * reduced
                    t = x * prime.conj()
                    q = GaussianInt(_round_half_up(t.re, np_), _round_half_up(t.im, np_))
                    rem = x - q * prime
                    s = int(table[rem.re + off, rem.im + off])
                    if s == 0:
                        raise AssertionError("boundary symbol vanished unexpectedly")
                    a *= s * np_ ** (l - 1)
                    g = math.gcd(b, np_)
                    a *= g
                    b = (b // g) * (np_ // g)
            else:
                return 0.0
        return a * math.sqrt(b)
