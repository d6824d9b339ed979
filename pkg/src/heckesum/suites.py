"""Self-contained verification suites behind the ``verify`` subcommand.

Each suite runs a bundle of identity and property checks at a scale
meant for interactive use (the pytest acceptance module runs the full
criteria).  A check result is a dict with ``name``, ``passed`` and a
human-readable ``detail``.
"""

from __future__ import annotations

import math
import random
import time

from .charsum import (
    TruncationPolicy,
    nondegenerate_poisson_moduli,
    poisson_identity_sides,
    s2_direct,
    s2_poisson,
)
from .gauss_sum import g2_closed, g2_naive
from .gint import GaussianInt, gcd, primary_in_norm_range
from .series import K1_TEST_SET, SeriesCaps, verify_factorization
from .smooth import SmoothWeight
from .symbols import quadratic_symbol

#: Fixed frequency set for the Gauss-sum oracle: zero, the units, the
#: ramified prime and its square, small split/inert primes and a prime
#: square, so moduli sharing factors with k are well represented.
ORACLE_K_SET = (
    GaussianInt(0, 0),
    GaussianInt(1, 0),
    GaussianInt(0, 1),
    GaussianInt(-1, 0),
    GaussianInt(0, -1),
    GaussianInt(1, 1),
    GaussianInt(2, 0),
    GaussianInt(-1, 2),
    GaussianInt(-1, -2),
    GaussianInt(-3, 0),
    GaussianInt(3, 2),
    GaussianInt(-3, -4),
)


def _check(name: str, passed: bool, detail: str) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def gauss_suite(norm_bound: int = 1500) -> list[dict]:
    checks = []
    worst = 0.0
    count = 0
    for n in primary_in_norm_range(0, norm_bound + 0.5):
        nn = n.norm()
        for k in ORACLE_K_SET:
            d = abs(g2_naive(k, n).value - g2_closed(k, n).value)
            worst = max(worst, d / nn)
            count += 1
    checks.append(
        _check(
            "oracle_equivalence",
            worst <= 1e-6,
            f"{count} pairs, worst |naive-closed|/N(n) = {worst:.3e}",
        )
    )

    rng = random.Random(20260810)
    moduli = primary_in_norm_range(1.5, 2000)
    bad = 0
    for _ in range(300):
        n = rng.choice(moduli)
        r = GaussianInt(rng.randint(-9, 9), rng.randint(-9, 9))
        while True:
            s = GaussianInt(rng.randint(-9, 9), rng.randint(-9, 9))
            if not s.is_zero() and gcd(s, n).is_unit():
                break
        lhs = g2_closed(r * s, n)
        sym = quadratic_symbol(s, n)
        rhs = g2_closed(r, n)
        if lhs.exact != rhs.exact.scale(sym):
            bad += 1
    checks.append(_check("twist_identity", bad == 0, f"300 random triples, {bad} failures"))

    bad = 0
    pairs = 0
    prim = primary_in_norm_range(1.5, 160)
    for i, m in enumerate(prim):
        for n in prim[i + 1 :]:
            if not gcd(m, n).is_unit():
                continue
            pairs += 1
            for k in (GaussianInt(0, 0), GaussianInt(1, 0), GaussianInt(1, 1)):
                lhs = g2_closed(k, m * n).exact
                rhs = g2_closed(k, m).exact * g2_closed(k, n).exact
                if lhs != rhs:
                    bad += 1
    checks.append(
        _check("multiplicativity", bad == 0, f"{pairs} coprime pairs, {bad} failures")
    )

    worst = 0.0
    for n in primary_in_norm_range(0, 800):
        for k in ORACLE_K_SET:
            worst = max(worst, abs(g2_closed(k, n).value) / n.norm())
    checks.append(
        _check("magnitude_bound", worst <= 1.0 + 1e-12, f"max |g2|/N(n) = {worst:.6f}")
    )

    bad = 0
    for n in primary_in_norm_range(1.5, 300):
        for k2 in (GaussianInt(1, 0), GaussianInt(-1, 2), GaussianInt(2, 1)):
            base = g2_closed(k2 * k2, n).exact
            for u in (GaussianInt(0, 1), GaussianInt(0, -1), GaussianInt(-1, 0)):
                uk = u * k2
                if g2_closed(uk * uk, n).exact != base:
                    bad += 1
    checks.append(_check("unit_square_independence", bad == 0, f"{bad} failures"))
    return checks


def poisson_suite() -> list[dict]:
    checks = []
    w = SmoothWeight()
    moduli = nondegenerate_poisson_moduli(8, 120, (10.0, 100.0), w)
    worst = 0.0
    for n in moduli:
        for x in (10.0, 100.0):
            lhs, rhs = poisson_identity_sides(n, x, w, eps_tail=1e-11)
            scale = max(abs(lhs), abs(rhs), 1e-30)
            worst = max(worst, abs(lhs - rhs) / scale)
    checks.append(
        _check(
            "per_modulus_identity",
            worst <= 1e-8,
            f"{len(moduli)} moduli, X in (10, 100), worst relative = {worst:.3e}",
        )
    )

    phi = SmoothWeight()
    policy = TruncationPolicy()
    d = s2_direct(200.0, 20.0, phi, w, policy)
    p = s2_poisson(200.0, 20.0, phi, w, policy)
    tol = 1e-6 * max(abs(d.value), 200.0 * math.sqrt(20.0))
    checks.append(
        _check(
            "cross_path_identity",
            abs(d.value - p.value) <= tol,
            f"X=200 Y=20: direct {d.value:.12e}, poisson {p.value:.12e}",
        )
    )
    return checks


def series_suite() -> list[dict]:
    checks = []
    caps = SeriesCaps(n_norm_cap=40_000, k2_norm_cap=40_000, prime_norm_cap=4_000)
    worst = 0.0
    failures = []
    for k1 in K1_TEST_SET:
        rep = verify_factorization(k1, 2.0, 2.0, caps)
        worst = max(worst, rep.rel_delta)
        if not rep.passed:
            failures.append(str(k1))
    checks.append(
        _check(
            "factorization_identity",
            not failures,
            f"(v,w)=(2,2), {len(K1_TEST_SET)} k1, worst rel delta = {worst:.3e}"
            + (f", failed: {failures}" if failures else ""),
        )
    )
    return checks


SUITES = {
    "gauss": gauss_suite,
    "poisson": poisson_suite,
    "series": series_suite,
}


def run_suite(name: str) -> dict:
    """Run one named suite (or 'all'); returns a JSON-ready report."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ValueError(f"unknown suite {name!r}")
    checks = []
    for nm in names:
        t0 = time.perf_counter()
        for c in SUITES[nm]():
            c["suite"] = nm
            checks.append(c)
        checks[-1]["suite_seconds"] = time.perf_counter() - t0
    return {
        "suite": name,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
