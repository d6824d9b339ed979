"""Exact arithmetic in the ring of Gaussian integers Z[i].

Conventions used throughout the package:

* ``GaussianInt`` coordinates are plain Python integers, so ring
  arithmetic is exact at any size.  The vectorised numpy helpers that
  mirror these operations guard their int64 ranges and raise
  ``OverflowError`` instead of wrapping.
* An element of odd norm is *primary* when it is congruent to
  1 mod (1+i)**3; each odd element has exactly one primary associate.
* ``factor`` reports prime generators from a fixed set: 1+i for the
  ramified prime and the primary generator of every odd prime ideal.
* ``divrem(a, b)`` rounds both coordinates of a*conj(b)/N(b) with
  floor(t + 1/2), which forces N(r) <= N(b)/2 and makes canonical
  residues deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class GaussianInt:
    """An element a + b*i of Z[i] with exact integer coordinates."""

    __slots__ = ("re", "im")

    re: int
    im: int

    def __init__(self, re: int = 0, im: int = 0) -> None:
        self.re = re
        self.im = im

    # -- basic structure -------------------------------------------------

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_odd(self) -> bool:
        """True when coprime to 1+i, i.e. the norm is odd."""
        return (self.re + self.im) % 2 == 1

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def __pow__(self, e: int) -> "GaussianInt":
        if e < 0:
            raise ValueError("negative exponent")
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "GaussianInt") -> tuple["GaussianInt", "GaussianInt"]:
        return divrem(self, other)

    def __floordiv__(self, other: "GaussianInt") -> "GaussianInt":
        return divrem(self, other)[0]

    def __mod__(self, other: "GaussianInt") -> "GaussianInt":
        return divrem(self, other)[1]

    # -- comparisons / hashing --------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianInt):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self) -> str:
        return f"{self.re}{self.im:+}i"

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm(), self.re, self.im)


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
IUNIT = GaussianInt(0, 1)
RAMIFIED = GaussianInt(1, 1)
UNITS = (ONE, IUNIT, GaussianInt(-1, 0), GaussianInt(0, -1))

_RAMIFIED_CUBED = GaussianInt(-2, 2)  # (1+i)**3


def norm(z: GaussianInt) -> int:
    """Field norm N(a+bi) = a**2 + b**2."""
    return z.norm()


def _round_half_up(t: int, n: int) -> int:
    """floor(t/n + 1/2) for integers, n > 0."""
    return (2 * t + n) // (2 * n)


def divrem(a: GaussianInt, b: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Euclidean division a = q*b + r with N(r) <= N(b)/2."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero in Z[i]")
    nb = b.norm()
    t = a * b.conj()
    q = GaussianInt(_round_half_up(t.re, nb), _round_half_up(t.im, nb))
    r = a - q * b
    return q, r


def canonical_mod(a: GaussianInt, n: GaussianInt) -> GaussianInt:
    """The canonical representative of a modulo n (remainder of divrem)."""
    return divrem(a, n)[1]


def divides(d: GaussianInt, a: GaussianInt) -> bool:
    """True when d | a exactly."""
    if d.is_zero():
        return a.is_zero()
    nd = d.norm()
    t = a * d.conj()
    return t.re % nd == 0 and t.im % nd == 0


def exact_div(a: GaussianInt, d: GaussianInt) -> GaussianInt:
    """a / d when d | a; raises ValueError otherwise."""
    if d.is_zero():
        raise ZeroDivisionError("division by zero in Z[i]")
    nd = d.norm()
    t = a * d.conj()
    if t.re % nd or t.im % nd:
        raise ValueError(f"{d} does not divide {a}")
    return GaussianInt(t.re // nd, t.im // nd)


def _euclid(a: GaussianInt, b: GaussianInt) -> tuple[GaussianInt, int]:
    """Plain Euclidean gcd; returns (some associate of the gcd, step count)."""
    steps = 0
    while not b.is_zero():
        a, b = b, divrem(a, b)[1]
        steps += 1
    return a, steps


def is_primary(n: GaussianInt) -> bool:
    """True when n is congruent to 1 modulo (1+i)**3.

    Uses the arithmetic characterisation (re odd, im even,
    re+im = 1 mod 4); ``is_primary_by_division`` is the defining test and
    the suite proves the two agree on all odd elements of norm <= 1e5.
    """
    return n.re % 2 == 1 and n.im % 2 == 0 and (n.re + n.im) % 4 == 1


def is_primary_by_division(n: GaussianInt) -> bool:
    """Defining test: (1+i)**3 divides n - 1."""
    return divides(_RAMIFIED_CUBED, n - ONE)


def to_primary(n: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Write n = unit * primary for odd n; the primary associate is unique."""
    if n.is_zero() or n.norm() % 2 == 0:
        raise ValueError("to_primary requires an element of odd norm")
    hits = []
    for u in UNITS:
        cand = exact_div(n, u)
        if is_primary(cand):
            hits.append((u, cand))
    if len(hits) != 1:
        raise AssertionError(f"expected exactly one primary associate of {n}")
    return hits[0]


def gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    """Canonical gcd: (1+i)**e times the primary generator of the odd part."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    g, _ = _euclid(a, b)
    e = 0
    while not g.is_odd():
        g = exact_div(g, RAMIFIED)
        e += 1
    _, p = to_primary(g)
    return RAMIFIED**e * p


def modpow(a: GaussianInt, e: int, n: GaussianInt) -> GaussianInt:
    """Canonical representative of a**e mod n by square-and-multiply."""
    if n.is_zero():
        raise ZeroDivisionError("zero modulus")
    if e < 0:
        raise ValueError("negative exponent")
    result = canonical_mod(ONE, n)
    base = canonical_mod(a, n)
    while e:
        if e & 1:
            result = canonical_mod(result * base, n)
        base = canonical_mod(base * base, n)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# Rational integer factoring support (trial division + deterministic rho)
# ---------------------------------------------------------------------------

_TRIAL_LIMIT = 1 << 20

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime_int(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho_brent(n: int) -> int:
    """Deterministic Brent rho: returns a nontrivial factor of composite odd n."""
    for c in range(1, 64):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def _factor_int(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer."""
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < _TRIAL_LIMIT:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += wheel[i]
        i = (i + 1) % 8
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if _is_prime_int(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _rho_brent(m)
            stack.append(d)
            stack.append(m // d)
    return out


def _sqrt_minus_one_mod(p: int) -> int:
    """A square root of -1 mod p for p = 1 mod 4 (deterministic)."""
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    return pow(c, (p - 1) // 4, p)


@lru_cache(maxsize=None)
def split_prime_above(p: int) -> GaussianInt:
    """The primary Gaussian prime of norm p with positive imaginary part."""
    if p % 4 != 1:
        raise ValueError("p must be a rational prime = 1 mod 4")
    x = _sqrt_minus_one_mod(p)
    g, _ = _euclid(GaussianInt(p, 0), GaussianInt(x, 1))
    _, prime = to_primary(g)
    if prime.im < 0:
        prime = prime.conj()
    return prime


@dataclass(frozen=True)
class Factorization:
    """unit * (1+i)**ramified_exp * prod(prime**exp), primes sorted by (norm, re, im)."""

    unit: GaussianInt
    ramified_exp: int
    factors: tuple[tuple[GaussianInt, int], ...]

    def value(self) -> GaussianInt:
        out = self.unit * RAMIFIED**self.ramified_exp
        for prime, e in self.factors:
            out = out * prime**e
        return out

    def norm(self) -> int:
        n = 1 << self.ramified_exp
        for prime, e in self.factors:
            n *= prime.norm() ** e
        return n

    def is_perfect_square(self) -> bool:
        """True when every prime (including 1+i) occurs to an even power."""
        if self.ramified_exp % 2:
            return False
        return all(e % 2 == 0 for _, e in self.factors)


DEFAULT_FACTOR_BOUND = 1 << 62


def factor(n: GaussianInt, bound: int = DEFAULT_FACTOR_BOUND) -> Factorization:
    """Factor n over Z[i] into the fixed generator set."""
    if n.is_zero():
        raise ValueError("cannot factor 0")
    nn = n.norm()
    if nn > bound:
        raise ValueError(f"norm {nn} exceeds factoring bound {bound}")
    ram = 0
    rest = n
    while not rest.is_odd():
        rest = exact_div(rest, RAMIFIED)
        ram += 1
    unit, odd = to_primary(rest)
    factors: list[tuple[GaussianInt, int]] = []
    for p, a in sorted(_factor_int(odd.norm()).items()):
        if p % 4 == 1:
            prime = split_prime_above(p)
            e = 0
            body = odd
            while divides(prime, body):
                body = exact_div(body, prime)
                e += 1
            if e:
                factors.append((prime, e))
            if a - e:
                factors.append((prime.conj(), a - e))
        else:
            if a % 2:
                raise AssertionError(f"inert prime {p} with odd norm exponent")
            factors.append((GaussianInt(-p, 0), a // 2))
    factors.sort(key=lambda t: t[0].sort_key())
    result = Factorization(unit=unit, ramified_exp=ram, factors=tuple(factors))
    if result.value() != n:
        raise AssertionError(f"factor round-trip failed for {n}")
    return result


# ---------------------------------------------------------------------------
# Residue systems and vectorised lattice helpers
# ---------------------------------------------------------------------------

_INT64_GUARD = 1 << 62

DEFAULT_RESIDUE_BOUND = 10**6


def _reduce_arrays(
    xr: np.ndarray, xi: np.ndarray, n: GaussianInt
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised canonical reduction mod n; exact int64 arithmetic."""
    nn = n.norm()
    peak = (int(np.abs(xr).max(initial=0)) + int(np.abs(xi).max(initial=0))) * (
        abs(n.re) + abs(n.im)
    )
    if peak * 2 + nn >= _INT64_GUARD:
        raise OverflowError("canonical reduction would overflow int64")
    tr = xr * n.re + xi * n.im
    ti = xi * n.re - xr * n.im
    qr = (2 * tr + nn) // (2 * nn)
    qi = (2 * ti + nn) // (2 * nn)
    rr = xr - (qr * n.re - qi * n.im)
    ri = xi - (qr * n.im + qi * n.re)
    return rr, ri


def residues(n: GaussianInt, bound: int = DEFAULT_RESIDUE_BOUND) -> list[GaussianInt]:
    """A canonical complete residue system mod n, sorted by (re, im)."""
    if n.is_zero():
        raise ValueError("zero modulus")
    nn = n.norm()
    if nn > bound:
        raise ValueError(f"norm {nn} exceeds residue bound {bound}")
    rr, ri = residue_arrays(n, bound)
    return [GaussianInt(int(a), int(b)) for a, b in zip(rr, ri)]


def residue_arrays(
    n: GaussianInt, bound: int = DEFAULT_RESIDUE_BOUND
) -> tuple[np.ndarray, np.ndarray]:
    """Canonical residues mod n as int64 coordinate arrays sorted by (re, im)."""
    nn = n.norm()
    if nn > bound:
        raise ValueError(f"norm {nn} exceeds residue bound {bound}")
    b = math.isqrt(nn) + 2
    side = np.arange(-b, b + 1, dtype=np.int64)
    xr, xi = np.meshgrid(side, side, indexing="ij")
    xr = xr.ravel()
    xi = xi.ravel()
    rr, ri = _reduce_arrays(xr, xi, n)
    enc = rr * (4 * b + 1) + ri
    _, keep = np.unique(enc, return_index=True)
    rr, ri = rr[keep], ri[keep]
    order = np.lexsort((ri, rr))
    rr, ri = rr[order], ri[order]
    if rr.size != nn:
        raise AssertionError(f"residue count {rr.size} != N(n) = {nn}")
    return rr, ri


def primary_in_norm_range(lo: float, hi: float) -> list[GaussianInt]:
    """All primary elements with lo < N(n) < hi, sorted by (norm, re, im)."""
    if hi <= 1:
        return []
    b = math.isqrt(int(math.ceil(hi))) + 1
    side = np.arange(-b, b + 1, dtype=np.int64)
    xr, xi = np.meshgrid(side, side, indexing="ij")
    xr = xr.ravel()
    xi = xi.ravel()
    nrm = xr * xr + xi * xi
    mask = (
        (nrm > lo)
        & (nrm < hi)
        & (xr % 2 == 1)
        & (xi % 2 == 0)
        & ((xr + xi) % 4 == 1)
    )
    xr, xi, nrm = xr[mask], xi[mask], nrm[mask]
    order = np.lexsort((xi, xr, nrm))
    return [GaussianInt(int(a), int(b_)) for a, b_ in zip(xr[order], xi[order])]


def odd_in_norm_range(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coordinates and norms of all m coprime to 1+i with lo < N(m) < hi.

    Returned sorted by (norm, re, im) so downstream accumulation order is
    reproducible.
    """
    if hi <= 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    b = math.isqrt(int(math.ceil(hi))) + 1
    side = np.arange(-b, b + 1, dtype=np.int64)
    xr, xi = np.meshgrid(side, side, indexing="ij")
    xr = xr.ravel()
    xi = xi.ravel()
    nrm = xr * xr + xi * xi
    mask = (nrm > lo) & (nrm < hi) & ((xr + xi) % 2 == 1)
    xr, xi, nrm = xr[mask], xi[mask], nrm[mask]
    order = np.lexsort((xi, xr, nrm))
    return xr[order], xi[order], nrm[order]


@lru_cache(maxsize=None)
def rational_primes(bound: int) -> tuple[int, ...]:
    """Rational primes <= bound (simple sieve; bound is modest here)."""
    if bound < 2:
        return ()
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


@lru_cache(maxsize=None)
def primary_primes(norm_bound: int) -> tuple[GaussianInt, ...]:
    """All primary Gaussian primes of odd norm <= norm_bound, sorted by (norm, re, im)."""
    out: list[GaussianInt] = []
    for p in rational_primes(norm_bound):
        if p == 2:
            continue
        if p % 4 == 1:
            prime = split_prime_above(p)
            out.append(prime)
            out.append(to_primary(prime.conj())[1])
        elif p * p <= norm_bound:
            out.append(GaussianInt(-p, 0))
    out.sort(key=GaussianInt.sort_key)
    return tuple(out)


@dataclass(frozen=True)
class SurdValue:
    """Exact number a * sqrt(b) with b squarefree and positive; 0 is (0, 1)."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.b <= 0:
            raise ValueError("b must be positive")
        if self.a == 0 and self.b != 1:
            raise ValueError("zero must be represented as (0, 1)")

    @classmethod
    def from_int(cls, a: int) -> "SurdValue":
        return cls(a, 1)

    @classmethod
    def sqrt_of(cls, n: int) -> "SurdValue":
        """Exact sqrt(n) for n >= 1, extracting the square part."""
        if n < 1:
            raise ValueError("sqrt_of requires n >= 1")
        a, b = 1, 1
        for p, e in _factor_int(n).items():
            a *= p ** (e // 2)
            if e % 2:
                b *= p
        return cls(a, b)

    def __mul__(self, other: "SurdValue") -> "SurdValue":
        if self.a == 0 or other.a == 0:
            return SurdValue(0, 1)
        g = math.gcd(self.b, other.b)
        return SurdValue(self.a * other.a * g, (self.b // g) * (other.b // g))

    def scale(self, c: int) -> "SurdValue":
        if c == 0 or self.a == 0:
            return SurdValue(0, 1)
        return SurdValue(self.a * c, self.b)

    def __neg__(self) -> "SurdValue":
        return self.scale(-1)

    def to_float(self) -> float:
        return self.a * math.sqrt(self.b)

    def is_zero(self) -> bool:
        return self.a == 0
