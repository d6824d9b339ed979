"""The double Dirichlet series J_k1(v, w) and its L-function factorisation.

J_k1(v, w) sums g2(k1 k2^2, n) / (N(n)^(w+1) N(k2)^(2v)) over primary n
and over ideal generators k2.  The k2 weight is the v-th power of the
norm of the square k2^2: it arises from splitting a frequency weight
N(k)^(-v) over k = k1 k2^2, and it is the weight under which the local
Euler factors below reproduce the double sum.  Because the quadratic
symbol of a unit square is 1, the summand does not depend on which
generator represents an ideal, and the even part of the k2 range
contributes a trivial geometric factor that the factorisation's
conventions normalise away (the ramified local factor is defined to be
1); accordingly the k2 sum here runs over the odd generators, i.e. the
primary elements.

Everything is verified inside the absolute-convergence region
Re v, Re w >= 1.25: the identity under test is

    J_k1(v, w) = L(1/2 + w, chi_{i k1}) * J2_k1(v, w)

with J2 an Euler product with finitely many corrected factors.  Tail
budgets come from the trivial bound |g2(k, n)| <= N(n), so a pass is
rigorous relative to the truncations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .gauss_sum import _g2_local
from .gint import (
    GaussianInt,
    IUNIT,
    ONE,
    RAMIFIED,
    factor,
    primary_primes,
)
from .symbols import quadratic_prime

#: Seven square-free k1 covering units, a split prime, an inert prime and
#: a mixed product; chi_{i k1} is principal exactly for k1 = i**3.
K1_TEST_SET = (
    ONE,
    IUNIT,
    GaussianInt(-1, 0),
    GaussianInt(0, -1),
    GaussianInt(-1, 2),
    GaussianInt(-3, 0),
    GaussianInt(3, -6),
)

# Odd-ideal counting A(T) <= ALPHA*T + BETA*sqrt(T) + GAMMA, validated
# exhaustively in the test suite up to the enumeration bound.
_ALPHA = math.pi / 8.0
_BETA = 2.0
_GAMMA = 8.0


@dataclass(frozen=True)
class SeriesCaps:
    n_norm_cap: int = 200_000
    k2_norm_cap: int = 200_000
    prime_norm_cap: int = 10_000

    def to_dict(self) -> dict:
        return {
            "n_norm_cap": self.n_norm_cap,
            "k2_norm_cap": self.k2_norm_cap,
            "prime_norm_cap": self.prime_norm_cap,
        }


@dataclass(frozen=True)
class SeriesPoint:
    """Evaluation point (k1, v, w) with truncation caps; k1 must be square-free."""

    k1: GaussianInt
    v: complex
    w: complex
    caps: SeriesCaps = SeriesCaps()

    def __post_init__(self) -> None:
        f = factor(self.k1)
        if f.ramified_exp > 1 or any(e > 1 for _, e in f.factors):
            raise ValueError(f"{self.k1} is not square-free")


@dataclass(frozen=True)
class TruncatedValue:
    value: complex
    tail: float


class PrimaryEnumeration:
    """All primary elements with norm <= bound, with factorisation data.

    Elements are generated as products of primary prime powers, so each
    carries its factorisation as ((prime_index, exponent), ...); no
    coordinates are stored since every consumer works through the local
    data of the primes.
    """

    def __init__(self, bound: int) -> None:
        self.bound = bound
        self.primes = primary_primes(bound)
        self.prime_norms = np.array([p.norm() for p in self.primes], dtype=np.int64)
        norms: list[int] = []
        facs: list[tuple[tuple[int, int], ...]] = []
        pn = self.prime_norms
        n_primes = len(self.primes)

        def dfs(start: int, cur: int, fac: tuple[tuple[int, int], ...]) -> None:
            norms.append(cur)
            facs.append(fac)
            for i in range(start, n_primes):
                base = int(pn[i])
                v = cur * base
                if v > bound:
                    break
                e = 1
                while v <= bound:
                    dfs(i + 1, v, fac + ((i, e),))
                    e += 1
                    v *= base

        dfs(0, 1, ())
        order = np.argsort(np.array(norms, dtype=np.int64), kind="stable")
        self.norms = np.array(norms, dtype=np.int64)[order]
        self.factors = [facs[i] for i in order]

    def count_upto(self, t: float) -> int:
        return int(np.searchsorted(self.norms, t, side="right"))


@lru_cache(maxsize=2)
def primary_enumeration(bound: int) -> PrimaryEnumeration:
    return PrimaryEnumeration(bound)


def tail_norm_sum(sigma: float, cap: int, enum: PrimaryEnumeration) -> float:
    """Upper bound for sum of N^-sigma over primary elements with N > cap."""
    if sigma <= 1.0:
        raise ValueError("tail bound requires sigma > 1")
    a_c = enum.count_upto(cap)
    c = float(cap)
    bound = -a_c * c**-sigma + sigma * (
        _ALPHA * c ** (1.0 - sigma) / (sigma - 1.0)
        + _BETA * c ** (0.5 - sigma) / (sigma - 0.5)
        + _GAMMA * c**-sigma / sigma
    )
    return max(bound, 0.0)


def _chi_on_primes(k1: GaussianInt, enum: PrimaryEnumeration) -> np.ndarray:
    """(i*k1 / prime) for every enumerated prime, int8 in {-1, 0, 1}."""
    ik1 = IUNIT * k1
    return np.array(
        [quadratic_prime(ik1, p) for p in enum.primes], dtype=np.int8
    )


def _h1_on_primes(k1: GaussianInt, enum: PrimaryEnumeration) -> np.ndarray:
    """ord_prime(k1) for every enumerated prime (0 or 1, k1 square-free)."""
    out = np.zeros(len(enum.primes), dtype=np.int8)
    for prime, e in factor(k1).factors:
        idx = int(np.searchsorted(enum.prime_norms, prime.norm()))
        while enum.primes[idx] != prime:
            idx += 1
        out[idx] = e
    return out


def _chi_on_elements(k1: GaussianInt, enum: PrimaryEnumeration) -> np.ndarray:
    chi_p = _chi_on_primes(k1, enum)
    out = np.empty(len(enum.factors), dtype=np.int8)
    for j, fac in enumerate(enum.factors):
        s = 1
        for pi, e in fac:
            c = int(chi_p[pi])
            if c == 0:
                s = 0
                break
            if e % 2:
                s *= c
        out[j] = s
    return out


def l_hecke_truncated(s: complex, k1: GaussianInt, cap: int) -> TruncatedValue:
    """Truncated L(s, chi_{i k1}) = sum over primary n of chi(n) N(n)^-s."""
    s = complex(s)
    if s.real < 1.25:
        raise ValueError("l_hecke_truncated requires Re s >= 1.25")
    enum = primary_enumeration(max(cap, 1000))
    hi = enum.count_upto(cap)
    chi = _chi_on_elements(k1, enum)[:hi].astype(np.float64)
    norms = enum.norms[:hi].astype(np.float64)
    value = complex(np.sum(chi * np.exp(-s * np.log(norms))))
    return TruncatedValue(value, tail_norm_sum(s.real, cap, enum))


def j_truncated(point: SeriesPoint) -> TruncatedValue:
    """Truncated J_k1(v, w) by structured double summation.

    The k2 sum is regrouped by the exponent vector of k2 at the primes
    of n (an exact rearrangement of the finite truncated sum, checked
    against the literal pair loop in the tests): for each exponent
    choice the Gauss-sum local values are constants, and the remaining
    k2 factors coprime to n enter through Moebius-alternating prefix
    sums of N(k2)^-v.
    """
    v, w = complex(point.v), complex(point.w)
    if v.real < 1.25 or w.real < 1.25:
        raise ValueError("j_truncated requires Re v, Re w >= 1.25")
    caps = point.caps
    cn, ck = caps.n_norm_cap, caps.k2_norm_cap
    enum = primary_enumeration(max(cn, ck))
    chi_p = _chi_on_primes(point.k1, enum)
    h1_p = _h1_on_primes(point.k1, enum)
    pn = enum.prime_norms

    k2_hi = enum.count_upto(ck)
    k2_norms = enum.norms[:k2_hi]
    k2_vals = np.exp(-2.0 * v * np.log(k2_norms.astype(np.float64)))
    prefix = np.zeros(ck + 1, dtype=np.complex128)
    np.add.at(prefix, k2_norms, k2_vals)
    prefix = np.cumsum(prefix)
    s_v_trunc_abs = float(
        np.sum(np.exp(-2.0 * v.real * np.log(k2_norms.astype(np.float64))))
    )

    n_hi = enum.count_upto(cn)
    total = 0.0 + 0.0j
    s_w_trunc_abs = float(
        np.sum(np.exp(-w.real * np.log(enum.norms[:n_hi].astype(np.float64))))
    )

    inv_v_at: dict[int, complex] = {}

    def inv_v(nrm: int) -> complex:
        got = inv_v_at.get(nrm)
        if got is None:
            got = cmath.exp(-2.0 * v * math.log(nrm))
            inv_v_at[nrm] = got
        return got

    for j in range(n_hi):
        fac = enum.factors[j]
        nn = int(enum.norms[j])
        # per-prime option lists: (exponent of k2 at this prime, local g2 value)
        opt_lists = []
        dead = False
        for pi, l in fac:
            np_ = int(pn[pi])
            h1 = int(h1_p[pi])
            opts: list[tuple[int, complex]] = []
            if h1 == 0:
                if l % 2:
                    e0 = (l - 1) // 2
                    if np_**e0 <= ck:
                        opts.append(
                            (e0, int(chi_p[pi]) * np_ ** (l - 1) * math.sqrt(np_))
                        )
                else:
                    phi_l = np_ ** (l - 1) * (np_ - 1)
                    e = l // 2
                    while np_**e <= ck:
                        opts.append((e, complex(phi_l)))
                        e += 1
            else:
                if l % 2 == 0:
                    e_a = (l - 2) // 2
                    if np_**e_a <= ck:
                        opts.append((e_a, complex(-(np_ ** (l - 1)))))
                    phi_l = np_ ** (l - 1) * (np_ - 1)
                    e = l // 2
                    while np_**e <= ck:
                        opts.append((e, complex(phi_l)))
                        e += 1
                # l odd with h1 = 1 leaves no nonzero local value
            if not opts:
                dead = True
                break
            opt_lists.append((np_, opts))
        if dead:
            continue

        prime_norm_list = [int(pn[pi]) for pi, _ in fac]
        n_factor = cmath.exp(-(w + 1.0) * math.log(nn))

        def coprime_sum(t_cap: int) -> complex:
            if t_cap < 1:
                return 0.0 + 0.0j
            acc = prefix[min(t_cap, ck)]
            m = len(prime_norm_list)
            for mask in range(1, 1 << m):
                d = 1
                for b in range(m):
                    if mask >> b & 1:
                        d *= prime_norm_list[b]
                tt = t_cap // d
                if tt < 1:
                    continue
                term = prefix[min(tt, ck)]
                for b in range(m):
                    if mask >> b & 1:
                        term *= inv_v(prime_norm_list[b])
                acc += -term if bin(mask).count("1") % 2 else term
            return acc

        def walk(depth: int, coeff: complex, d_norm: int) -> complex:
            if depth == len(opt_lists):
                return coeff * coprime_sum(ck // d_norm)
            np_, opts = opt_lists[depth]
            acc = 0.0 + 0.0j
            for e, val in opts:
                nd = d_norm * np_**e
                if nd > ck:
                    continue
                acc += walk(depth + 1, coeff * val * inv_v(np_) ** e, nd)
            return acc

        total += n_factor * walk(0, 1.0 + 0.0j, 1)

    s_v_total = s_v_trunc_abs + tail_norm_sum(2.0 * v.real, ck, enum)
    tail = (
        tail_norm_sum(w.real, cn, enum) * s_v_total
        + s_w_trunc_abs * tail_norm_sum(2.0 * v.real, ck, enum)
    )
    return TruncatedValue(total, tail)


def j_truncated_bruteforce(point: SeriesPoint, k2_units: Optional[list] = None):
    """Literal pair loop over (n, k2) with g2_closed; test oracle only.

    ``k2_units`` optionally multiplies each k2 by a unit, exercising the
    independence of the generator-set choice.
    """
    from .gauss_sum import g2_closed
    from .gint import primary_in_norm_range

    v, w = complex(point.v), complex(point.w)
    caps = point.caps
    n_els = primary_in_norm_range(0, caps.n_norm_cap + 0.5)
    k2_els = primary_in_norm_range(0, caps.k2_norm_cap + 0.5)
    if k2_units is not None:
        k2_els = [u * k2 for u, k2 in zip(k2_units, k2_els)]
    total = 0.0 + 0.0j
    for n in n_els:
        nn = n.norm()
        n_primary = n
        nf = cmath.exp(-(w + 1.0) * math.log(nn))
        for k2 in k2_els:
            g = g2_closed(point.k1 * k2 * k2, n_primary).value
            if g:
                total += nf * g * cmath.exp(-2.0 * v * math.log(k2.norm()))
    return total


# ---------------------------------------------------------------------------
# Euler factors
# ---------------------------------------------------------------------------


def _chi_at(k1: GaussianInt, prime: GaussianInt) -> int:
    if prime.norm() == 2:
        return 0
    return quadratic_prime(IUNIT * k1, prime)


def j_gen_factor(prime: GaussianInt, k1: GaussianInt, v: complex, w: complex) -> complex:
    """Generic local factor: even-exponent phi terms plus the boundary term.

    Defined by the same expression at every prime (including 1+i and
    primes dividing k1, where the character value is 0); j2 corrects the
    non-generic primes separately.
    """
    v, w = complex(v), complex(w)
    if v.real <= 0.0 or w.real < 0.0:
        raise ValueError("j_gen_factor requires Re v > 0 and Re w >= 0")
    np_ = prime.norm()
    chi_val = _chi_at(k1, prime)
    ln = math.log(np_)
    q = cmath.exp(-2.0 * v * ln)  # N^(-2v), the k2 ratio
    rw = cmath.exp(-2.0 * w * ln)  # N^(-2w), the even-n ratio
    even_term = 1.0 - 1.0 / np_
    odd_base = chi_val / math.sqrt(np_)
    total = 0.0 + 0.0j
    even_sum = 1.0 + 0.0j  # n = 0 term
    k2 = 0
    qk = 1.0 + 0.0j
    while True:
        if k2 >= 1:
            even_sum += even_term * rw**k2
        contrib = qk * (even_sum + odd_base * cmath.exp(-(2 * k2 + 1) * w * ln))
        total += contrib
        k2 += 1
        qk *= q
        if k2 > 4 and abs(qk) * (k2 + 3) < 1e-16 * max(1.0, abs(total)):
            break
    return total


def j_local_direct(prime: GaussianInt, k1: GaussianInt, v: complex, w: complex) -> complex:
    """Local factor by direct double summation of its defining series."""
    v, w = complex(v), complex(w)
    np_ = prime.norm()
    ln = math.log(np_)
    total = 0.0 + 0.0j
    k2 = 0
    while True:
        block = 0.0 + 0.0j
        r = k1 * (prime * prime) ** k2
        for n_exp in range(0, 2 * k2 + 3):
            if n_exp == 0:
                g = 1.0
            else:
                g = _g2_local(prime, n_exp, r).to_float()
            if g:
                block += g * cmath.exp(-(n_exp * (w + 1.0)) * ln)
        total += block * cmath.exp(-(2 * k2 * v) * ln)
        k2 += 1
        if k2 > 4 and abs(cmath.exp(-(2 * k2 * v) * ln)) * (k2 + 3) < 1e-16 * max(
            1.0, abs(total)
        ):
            break
    return total


def j2(k1: GaussianInt, v: complex, w: complex, prime_norm_cap: int = 10_000) -> complex:
    """The Euler-product factor J2 = Jgen * Jnon-gen, truncated at prime_norm_cap."""
    v, w = complex(v), complex(w)
    if v.real <= 0.5 or w.real <= 0.0:
        raise ValueError("j2 requires Re v > 1/2 and Re w > 0")
    prod = 1.0 + 0.0j
    # ramified factor: chi vanishes, and the local value is defined to be 1,
    # so the generic factor and its correction cancel exactly
    gen_ram = j_gen_factor(RAMIFIED, k1, v, w)
    prod *= gen_ram
    prod *= 1.0 / gen_ram
    for prime in primary_primes(prime_norm_cap):
        np_ = prime.norm()
        chi_val = _chi_at(k1, prime)
        gen = j_gen_factor(prime, k1, v, w)
        prod *= (1.0 - chi_val * cmath.exp(-(0.5 + w) * math.log(np_))) * gen
    for prime, _ in factor(k1).factors:
        if prime.norm() > prime_norm_cap:
            raise ValueError("prime_norm_cap must exceed the primes of k1")
        prod *= j_local_direct(prime, k1, v, w) / j_gen_factor(prime, k1, v, w)
    return prod


def _euler_tail_rel(v: complex, w: complex, cap: int, enum: PrimaryEnumeration) -> float:
    """Relative bound for the omitted Euler factors of j2 beyond cap."""
    log_tail = tail_norm_sum(1.0 + 2.0 * w.real, cap, enum) + 4.0 * tail_norm_sum(
        2.0 * v.real, cap, enum
    )
    return math.expm1(log_tail)


@dataclass
class FactorizationReport:
    k1: tuple[int, int]
    v: complex
    w: complex
    caps: SeriesCaps
    j_value: complex
    j_tail: float
    l_value: complex
    l_tail: float
    j2_value: complex
    product: complex
    delta: float
    budget: float
    rel_delta: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "k1": list(self.k1),
            "v": [self.v.real, self.v.imag],
            "w": [self.w.real, self.w.imag],
            "caps": self.caps.to_dict(),
            "j_value": [self.j_value.real, self.j_value.imag],
            "j_tail": self.j_tail,
            "l_value": [self.l_value.real, self.l_value.imag],
            "l_tail": self.l_tail,
            "j2_value": [self.j2_value.real, self.j2_value.imag],
            "product": [self.product.real, self.product.imag],
            "delta": self.delta,
            "budget": self.budget,
            "rel_delta": self.rel_delta,
            "passed": self.passed,
        }


def verify_factorization(
    k1: GaussianInt,
    v: complex,
    w: complex,
    caps: Optional[SeriesCaps] = None,
    rel_tol: float = 1e-2,
) -> FactorizationReport:
    """Check J = L(1/2+w, chi_{i k1}) * J2 within the truncation budget."""
    caps = caps or SeriesCaps()
    point = SeriesPoint(k1=k1, v=complex(v), w=complex(w), caps=caps)
    jt = j_truncated(point)
    lt = l_hecke_truncated(0.5 + complex(w), k1, caps.n_norm_cap)
    j2_val = j2(k1, complex(v), complex(w), caps.prime_norm_cap)
    enum = primary_enumeration(max(caps.n_norm_cap, caps.k2_norm_cap))
    euler_rel = _euler_tail_rel(complex(v), complex(w), caps.prime_norm_cap, enum)
    product = lt.value * j2_val
    delta = abs(jt.value - product)
    budget = (
        jt.tail
        + lt.tail * abs(j2_val) * (1.0 + euler_rel)
        + abs(lt.value) * abs(j2_val) * euler_rel
    )
    rel_delta = delta / max(abs(jt.value), 1e-300)
    return FactorizationReport(
        k1=(k1.re, k1.im),
        v=complex(v),
        w=complex(w),
        caps=caps,
        j_value=jt.value,
        j_tail=jt.tail,
        l_value=lt.value,
        l_tail=lt.tail,
        j2_value=j2_val,
        product=product,
        delta=delta,
        budget=budget,
        rel_delta=rel_delta,
        passed=bool(delta <= budget and rel_delta <= rel_tol),
    )
