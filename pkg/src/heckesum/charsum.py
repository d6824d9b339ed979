"""The smoothed character sum S2(X, Y) and its main-term diagnostics.

Two evaluators for

    S2 = sum over primary n, sum over m coprime to 1+i of
         ((1+i) m / n) Phi(N(n)/Y) W(N(m)/X):

* ``s2_direct`` performs the literal double sum with exact symbols.
* ``s2_poisson`` evaluates the dual expansion

      (X/2) sum_k (-1)^N(k) sum_n g2(k,n)/N(n) Phi(N(n)/Y)
            Wi(sqrt(N(k) X / (2 N(n)))),

  where the residual (1+i)/n symbols of the direct definition and of
  the per-modulus dual identity cancel (quadratic symbols square to 1),
  so no such factor may appear here.

The dual identity is exact, so the two evaluators agree to truncation
and quadrature error; this cross check, plus the k = 0 main term M0 and
the closed-form constant candidates, are the core artefacts here.

Accumulation discipline: per-n partials are formed in (norm, re, im)
order and combined with explicit pairwise summation, so results are
reproducible and independent of the worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .gauss_sum import G2Evaluator
from .gint import (
    GaussianInt,
    RAMIFIED,
    factor,
    odd_in_norm_range,
    primary_in_norm_range,
)
from .smooth import SmoothWeight, TransformTable, decay_threshold, mellin, w_tilde
from .symbols import SymbolTable, quadratic_prime, quadratic_symbol
from . import reporting

THETA = Fraction(131, 416)


def theta() -> Fraction:
    """Lattice-count error exponent used in the reported error envelopes."""
    return THETA


class WorkBudgetExceeded(RuntimeError):
    """The direct path would exceed the configured pair budget."""


@dataclass(frozen=True)
class TruncationPolicy:
    """Caps for the dual sum and the direct work budget.

    The dual k-range is derived from the transform decay: k is kept iff
    N(k) X / (2 N(n)) <= T(eps_tail)^2 for the largest contributing n.
    """

    eps_tail: float = 1e-10
    n_norm_cap: int = 4_000_000
    work_budget: int = 400_000_000
    k_norm_cap: Optional[int] = None

    def derived_k_cap(self, x: float, max_n_norm: int, threshold: float) -> int:
        if self.k_norm_cap is not None:
            return self.k_norm_cap
        return int(math.floor(2.0 * max_n_norm * threshold * threshold / x))

    def to_dict(self) -> dict:
        return {
            "eps_tail": self.eps_tail,
            "n_norm_cap": self.n_norm_cap,
            "work_budget": self.work_budget,
            "k_norm_cap": self.k_norm_cap,
        }


def pairwise_sum(values: Sequence[float]) -> float:
    """Fixed-shape pairwise summation (reproducible for a given order)."""
    n = len(values)
    if n == 0:
        return 0.0
    if n == 1:
        return float(values[0])
    half = n // 2
    return pairwise_sum(values[:half]) + pairwise_sum(values[half:])


def _primary_moduli(y: float, phi: SmoothWeight, cap: int) -> list[GaussianInt]:
    lo, hi = y * phi.support[0], y * phi.support[1]
    if hi > cap:
        raise WorkBudgetExceeded(f"modulus norms up to {hi:.3g} exceed n_norm_cap {cap}")
    return primary_in_norm_range(lo, hi)


# ---------------------------------------------------------------------------
# Direct path
# ---------------------------------------------------------------------------


def _direct_partial(
    n: GaussianInt,
    xr: np.ndarray,
    xi: np.ndarray,
    wvals: np.ndarray,
    use_table: bool,
) -> float:
    """Inner sum over m of ((1+i)m/n) W(N(m)/X) for one modulus."""
    ram = quadratic_symbol(RAMIFIED, n)
    if use_table:
        sym = SymbolTable(n).lookup(xr, xi)
        inner = float(np.sum(sym * wvals))
    else:
        fact = factor(n)
        acc = 0.0
        for a, b, wv in zip(xr, xi, wvals):
            m = GaussianInt(int(a), int(b))
            s = 1
            for prime, e in fact.factors:
                v = quadratic_prime(m, prime)
                if v == 0:
                    s = 0
                    break
                if e % 2:
                    s *= v
            acc += s * wv
        inner = acc
    return ram * inner


def _direct_chunk(args) -> list[tuple[tuple[int, int, int], float]]:
    coords, x, y, phi_d, w_d, budgeted_table = args
    phi = SmoothWeight.from_dict(phi_d)
    w = SmoothWeight.from_dict(w_d)
    xr, xi, nrm = odd_in_norm_range(x * w.support[0], x * w.support[1])
    wvals = w(nrm / x)
    out = []
    for re_, im_ in coords:
        n = GaussianInt(re_, im_)
        use_table = n.norm() < budgeted_table
        part = phi(n.norm() / y) * _direct_partial(n, xr, xi, wvals, use_table)
        out.append((n.sort_key(), part))
    return out


@dataclass
class PathResult:
    value: float
    terms: int
    n_count: int
    seconds: float
    m0: Optional[float] = None
    k_cap: Optional[int] = None


def s2_direct(
    x: float,
    y: float,
    phi: SmoothWeight,
    w: SmoothWeight,
    policy: Optional[TruncationPolicy] = None,
    threads: int = 1,
) -> PathResult:
    """Literal double sum over (n, m); exact symbols, float weights."""
    policy = policy or TruncationPolicy()
    t0 = time.perf_counter()
    n_list = _primary_moduli(y, phi, policy.n_norm_cap)
    xr, xi, nrm = odd_in_norm_range(x * w.support[0], x * w.support[1])
    pairs = len(n_list) * xr.size
    if pairs > policy.work_budget:
        raise WorkBudgetExceeded(
            f"{pairs} symbol evaluations exceed work budget {policy.work_budget}"
        )
    if not n_list or xr.size == 0:
        return PathResult(0.0, 0, len(n_list), time.perf_counter() - t0)
    table_cutoff = max(64, xr.size // 4)
    if threads > 1:
        chunks = _split([(n.re, n.im) for n in n_list], threads * 4)
        args = [
            (c, x, y, phi.to_dict(), w.to_dict(), table_cutoff) for c in chunks if c
        ]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = [kv for sub in ex.map(_direct_chunk, args) for kv in sub]
        results.sort(key=lambda kv: kv[0])
        partials = [v for _, v in results]
    else:
        wvals = w(nrm / x)
        partials = [
            phi(n.norm() / y)
            * _direct_partial(n, xr, xi, wvals, n.norm() < table_cutoff)
            for n in n_list
        ]
    return PathResult(
        pairwise_sum(partials), pairs, len(n_list), time.perf_counter() - t0
    )


def _split(items: list, parts: int) -> list[list]:
    size = max(1, (len(items) + parts - 1) // parts)
    return [items[i : i + size] for i in range(0, len(items), size)]


# ---------------------------------------------------------------------------
# Poisson-dual path
# ---------------------------------------------------------------------------


def _k_frequencies(cap: int):
    """All k != 0 with N(k) <= cap, sorted by (norm, re, im), grouped by norm."""
    if cap < 1:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z, z, z
    b = math.isqrt(cap) + 1
    side = np.arange(-b, b + 1, dtype=np.int64)
    kr, ki = np.meshgrid(side, side, indexing="ij")
    kr = kr.ravel()
    ki = ki.ravel()
    nrm = kr * kr + ki * ki
    mask = (nrm >= 1) & (nrm <= cap)
    kr, ki, nrm = kr[mask], ki[mask], nrm[mask]
    order = np.lexsort((ki, kr, nrm))
    kr, ki, nrm = kr[order], ki[order], nrm[order]
    norms, starts = np.unique(nrm, return_index=True)
    ends = np.append(starts[1:], nrm.size)
    return kr, ki, norms, starts, ends


_TABLE_CACHE: dict[tuple, TransformTable] = {}


def _transform_table(weight: SmoothWeight, t_max: float) -> TransformTable:
    key = (weight, round(float(t_max), 9))
    tab = _TABLE_CACHE.get(key)
    if tab is None:
        if len(_TABLE_CACHE) > 8:
            _TABLE_CACHE.clear()
        tab = TransformTable(weight, t_max)
        _TABLE_CACHE[key] = tab
    return tab


def _dual_partial_for_n(
    n: GaussianInt,
    x: float,
    threshold: float,
    table: Optional[TransformTable],
    kfreq,
    parity: bool,
) -> tuple[float, float, int]:
    """(zero-frequency piece, nonzero-frequency piece, k terms) for one n.

    Pieces exclude the common X/2 prefactor and the Phi weight; the zero
    piece also excludes Wi(0).
    """
    kr, ki, norms, starts, ends = kfreq
    ev = G2Evaluator(n)
    nn = n.norm()
    zero_piece = ev.zero_value / nn
    cap_n = int(math.floor(2.0 * nn * threshold * threshold / x))
    hi = int(np.searchsorted(norms, cap_n, side="right"))
    if hi == 0 or table is None:
        return zero_piece, 0.0, 0
    end = int(ends[hi - 1])
    g2vals = ev.eval_many(kr[:end], ki[:end])
    coeffs = np.add.reduceat(g2vals, starts[:hi])
    tvals = np.sqrt(norms[:hi] * (x / (2.0 * nn)))
    wt = np.asarray(table(tvals))
    signs = 1.0 - 2.0 * (norms[:hi] % 2).astype(np.float64)
    if not parity:
        signs = np.ones_like(signs)
    piece = float(np.sum(signs * coeffs * wt)) / nn
    return zero_piece, piece, end


def _poisson_chunk(args):
    coords, x, y, phi_d, w_d, threshold, coef, t_max, cap, parity = args
    phi = SmoothWeight.from_dict(phi_d)
    w = SmoothWeight.from_dict(w_d)
    table = None
    if coef is not None:
        table = TransformTable.__new__(TransformTable)
        table.weight = w
        table.t_max = t_max
        table.coef = coef
    kfreq = _k_frequencies(cap)
    out = []
    for re_, im_ in coords:
        n = GaussianInt(re_, im_)
        zero_piece, piece, terms = _dual_partial_for_n(
            n, x, threshold, table, kfreq, parity
        )
        pw = phi(n.norm() / y)
        out.append((n.sort_key(), zero_piece * pw, piece * pw, terms))
    return out


def s2_poisson(
    x: float,
    y: float,
    phi: SmoothWeight,
    w: SmoothWeight,
    policy: Optional[TruncationPolicy] = None,
    threads: int = 1,
    parity: bool = True,
) -> PathResult:
    """Dual evaluation; ``parity=False`` drops the (-1)^N(k) factor (negative control)."""
    policy = policy or TruncationPolicy()
    t0 = time.perf_counter()
    n_list = _primary_moduli(y, phi, policy.n_norm_cap)
    if not n_list:
        return PathResult(0.0, 0, 0, time.perf_counter() - t0, m0=0.0, k_cap=0)
    w0 = w_tilde(w, 0.0)
    threshold = decay_threshold(w, policy.eps_tail)
    max_norm = max(n.norm() for n in n_list)
    cap = policy.derived_k_cap(x, max_norm, threshold)
    table = _transform_table(w, threshold) if cap >= 1 else None
    if threads > 1:
        chunks = _split([(n.re, n.im) for n in n_list], threads * 4)
        coef = table.coef if table is not None else None
        t_max = table.t_max if table is not None else 1.0
        args = [
            (c, x, y, phi.to_dict(), w.to_dict(), threshold, coef, t_max, cap, parity)
            for c in chunks
            if c
        ]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            rows = [r for sub in ex.map(_poisson_chunk, args) for r in sub]
        rows.sort(key=lambda r: r[0])
        zero_parts = [r[1] for r in rows]
        prime_parts = [r[2] for r in rows]
        terms = sum(r[3] for r in rows)
    else:
        kfreq = _k_frequencies(cap)
        zero_parts, prime_parts = [], []
        terms = 0
        for n in n_list:
            zero_piece, piece, t_n = _dual_partial_for_n(
                n, x, threshold, table, kfreq, parity
            )
            pw = phi(n.norm() / y)
            zero_parts.append(zero_piece * pw)
            prime_parts.append(piece * pw)
            terms += t_n
    m0 = 0.5 * x * w0 * pairwise_sum(zero_parts)
    mprime = 0.5 * x * pairwise_sum(prime_parts)
    return PathResult(
        m0 + mprime,
        terms + len(n_list),
        len(n_list),
        time.perf_counter() - t0,
        m0=m0,
        k_cap=cap,
    )


def m0_term(x: float, y: float, phi: SmoothWeight, w: SmoothWeight) -> float:
    """The zero-frequency main term, over square moduli n = l^2 only.

    Matches the k = 0 part of ``s2_poisson`` bit for bit: the same
    phi(l^2)/N scalars are accumulated in the same (norm, re, im) order,
    and pairwise summation is unaffected by the exact zeros that the
    non-square moduli contribute there.
    """
    w0 = w_tilde(w, 0.0)
    lo, hi = y * phi.support[0], y * phi.support[1]
    if hi <= 1:
        return 0.0
    ells = primary_in_norm_range(0.0, math.sqrt(hi) * (1 + 1e-12) + 1)
    squares = []
    for l in ells:
        nn = l.norm() ** 2
        if lo < nn < hi:
            squares.append((l * l, l))
    squares.sort(key=lambda t: t[0].sort_key())
    partials = []
    for sq, l in squares:
        nn = sq.norm()
        fl = factor(l)
        phi_sq = 1
        for prime, e in fl.factors:
            np_ = prime.norm()
            phi_sq *= np_ ** (2 * e - 1) * (np_ - 1)
        partials.append(float(phi_sq) / nn * phi(nn / y))
    return 0.5 * x * w0 * pairwise_sum(partials)


# ---------------------------------------------------------------------------
# Per-modulus Poisson identity (both sides, for verification)
# ---------------------------------------------------------------------------


def poisson_direct_side(n: GaussianInt, x: float, w: SmoothWeight) -> float:
    """The direct m-sum of the per-modulus identity (cheap, no dual work)."""
    xr, xi, nrm = odd_in_norm_range(x * w.support[0], x * w.support[1])
    sym = SymbolTable(n).lookup(xr, xi)
    return float(np.sum(sym * w(nrm / x)))


def nondegenerate_poisson_moduli(
    count: int,
    norm_bound: float,
    xs: Sequence[float],
    w: SmoothWeight,
    min_lhs: float = 1e-3,
) -> list[GaussianInt]:
    """First `count` primary moduli whose direct sums stay away from zero.

    For many moduli both sides of the per-modulus identity vanish
    identically (unit-shell and conjugate-shell cancellations), where a
    relative comparison is meaningless; this picks, in (norm, re, im)
    order, moduli with |direct sum| > min_lhs at every requested X.
    """
    out = []
    for n in primary_in_norm_range(0, norm_bound):
        if all(abs(poisson_direct_side(n, x, w)) > min_lhs for x in xs):
            out.append(n)
            if len(out) == count:
                return out
    raise ValueError(f"only {len(out)} nondegenerate moduli below {norm_bound}")


def poisson_identity_sides(
    n: GaussianInt,
    x: float,
    w: SmoothWeight,
    eps_tail: float = 1e-11,
) -> tuple[float, float]:
    """(direct m-sum, truncated dual sum) for a single primary modulus n."""
    lhs = poisson_direct_side(n, x, w)

    nn = n.norm()
    threshold = decay_threshold(w, eps_tail)
    cap = int(math.floor(2.0 * nn * threshold * threshold / x))
    table = _transform_table(w, threshold) if cap >= 1 else None
    kfreq = _k_frequencies(cap)
    zero_piece, piece, _ = _dual_partial_for_n(n, x, threshold, table, kfreq, True)
    ram = quadratic_symbol(RAMIFIED, n)
    rhs = 0.5 * x * ram * (zero_piece * w_tilde(w, 0.0) + piece)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Dedekind zeta and the closed-form constant candidates
# ---------------------------------------------------------------------------

_PRIME_CLASSES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _prime_classes(bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Odd rational primes <= bound split by residue class mod 4."""
    got = _PRIME_CLASSES.get(bound)
    if got is not None:
        return got
    half = bound // 2
    sieve = np.ones(half, dtype=bool)  # index i <-> odd number 2i + 1
    sieve[0] = False
    for p in range(3, math.isqrt(bound) + 1, 2):
        if sieve[(p - 1) // 2]:
            sieve[(p * p - 1) // 2 :: p] = False
    idx = np.flatnonzero(sieve)
    p = 2 * idx.astype(np.int64) + 1
    split = p[p % 4 == 1]
    inert = p[p % 4 == 3]
    _PRIME_CLASSES.clear()  # keep at most one sieve in memory
    _PRIME_CLASSES[bound] = (split, inert)
    return split, inert


def _log_tail_integral(sigma: float, bound: float) -> float:
    """integral_bound^inf t^(-sigma) / ln t dt (smooth prime-density tail)."""
    from .smooth import adaptive_gl

    lo = math.log(bound)
    upper = 80.0 / (sigma - 1.0)

    def f(u):
        return np.exp(-(sigma - 1.0) * u) / (lo + u)

    return bound ** (1.0 - sigma) * float(adaptive_gl(f, 0.0, upper, 1e-13))


_ZETA_CACHE: dict[tuple[float, int], float] = {}

DEFAULT_ZETA_PRIME_BOUND = 10**8


def zeta_K(s: float, prime_bound: int = DEFAULT_ZETA_PRIME_BOUND) -> float:
    """Dedekind zeta of Q(i) by Euler product plus a density tail estimate."""
    if s <= 1:
        raise ValueError("zeta_K requires s > 1")
    key = (float(s), prime_bound)
    got = _ZETA_CACHE.get(key)
    if got is not None:
        return got
    split, inert = _prime_classes(prime_bound)
    logz = -math.log1p(-(2.0**-s))
    logz += -2.0 * float(np.sum(np.log1p(-np.power(split, -s, dtype=np.float64))))
    logz += -float(np.sum(np.log1p(-np.power(inert, -2.0 * s, dtype=np.float64))))
    # Primes above the sieve: density 1/(2 ln t) in each class mod 4;
    # -2 log1p(-x) = 2x + x^2 + ..., -log1p(-y) = y + ... with x=t^-s, y=t^-2s.
    tail = _log_tail_integral(s, prime_bound)
    tail += _log_tail_integral(2.0 * s, prime_bound)
    logz += tail
    val = math.exp(logz)
    _ZETA_CACHE[key] = val
    return val


def main_term_candidates(
    x: float,
    y: float,
    phi: SmoothWeight,
    w: SmoothWeight,
    zeta_prime_bound: int = DEFAULT_ZETA_PRIME_BOUND,
) -> dict:
    """Closed-form candidates for the main term, judged against the k=0 oracle.

    ``paper_pointwise`` reads the constant with the pointwise value
    Phi(1/2); ``mellin_variant`` replaces it with the Mellin value
    Phi-hat(1/2).  ``m0_direct`` is the exact zero-frequency term; the
    report labels whichever candidate lands closer.
    """
    w0 = w_tilde(w, 0.0)
    zk = zeta_K(2.0, zeta_prime_bound)
    base = math.pi / (24.0 * zk) * w0 * x * math.sqrt(y)
    phalf = phi(0.5)
    mhalf = mellin(phi, 0.5)
    if abs(mhalf.imag) > 1e-12 * max(1.0, abs(mhalf.real)):
        raise AssertionError("Mellin value at real s should be real")
    cands = {
        "paper_pointwise": base * phalf,
        "mellin_variant": base * mhalf.real,
        "m0_direct": m0_term(x, y, phi, w),
    }
    ref = cands["m0_direct"]
    closest = min(
        ("paper_pointwise", "mellin_variant"), key=lambda k: abs(cands[k] - ref)
    )
    cands["closest_to_m0"] = closest
    return cands


def error_envelope(x: float, y: float, eps: float = 0.01) -> float:
    """Diagnostic envelope, display only: the error-term shape
    X·Y^(theta/2) + X·sqrt(Y)·(Y/X)^(1+eps) relative to the main-term
    shape X·sqrt(Y).  Implied constants are unknown, so this is a band
    for plots, not a pass/fail bound."""
    th = float(THETA)
    return y ** ((th - 1.0) / 2.0) + (y / x) ** (1.0 + eps)


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------


@dataclass
class SumReport:
    """Inputs, outputs and counters of one S2 evaluation (self-contained)."""

    x: float
    y: float
    phi: dict
    w: dict
    policy: dict
    method: str
    threads: int
    s2_direct: Optional[float] = None
    s2_poisson: Optional[float] = None
    m0: Optional[float] = None
    discrepancy: Optional[float] = None
    candidates: Optional[dict] = None
    counts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "phi": self.phi,
            "w": self.w,
            "policy": self.policy,
            "method": self.method,
            "threads": self.threads,
            "s2_direct": self.s2_direct,
            "s2_poisson": self.s2_poisson,
            "m0": self.m0,
            "discrepancy": self.discrepancy,
            "candidates": self.candidates,
            "counts": self.counts,
            "timings": self.timings,
        }

    def to_json(self) -> str:
        return reporting.stable_json(self.to_dict())


def run_s2(
    x: float,
    y: float,
    phi: SmoothWeight,
    w: SmoothWeight,
    policy: Optional[TruncationPolicy] = None,
    method: str = "both",
    threads: int = 1,
    with_candidates: bool = True,
    zeta_prime_bound: int = DEFAULT_ZETA_PRIME_BOUND,
) -> SumReport:
    """Evaluate S2 by the requested path(s) and assemble a SumReport."""
    if method not in ("direct", "poisson", "both"):
        raise ValueError(f"unknown method {method!r}")
    policy = policy or TruncationPolicy()
    report = SumReport(
        x=x,
        y=y,
        phi=phi.to_dict(),
        w=w.to_dict(),
        policy=policy.to_dict(),
        method=method,
        threads=threads,
    )
    if method in ("direct", "both"):
        res = s2_direct(x, y, phi, w, policy, threads)
        report.s2_direct = res.value
        report.counts["direct_terms"] = res.terms
        report.counts["n_moduli"] = res.n_count
        report.timings["direct_seconds"] = res.seconds
    if method in ("poisson", "both"):
        res = s2_poisson(x, y, phi, w, policy, threads)
        report.s2_poisson = res.value
        report.m0 = res.m0
        report.counts["poisson_terms"] = res.terms
        report.counts["n_moduli"] = res.n_count
        report.counts["k_norm_cap"] = res.k_cap
        report.timings["poisson_seconds"] = res.seconds
    if report.s2_direct is not None and report.s2_poisson is not None:
        report.discrepancy = abs(report.s2_direct - report.s2_poisson)
    if with_candidates:
        report.candidates = main_term_candidates(
            x, y, phi, w, zeta_prime_bound=zeta_prime_bound
        )
        if report.m0 is None:
            report.m0 = report.candidates["m0_direct"]
    return report
