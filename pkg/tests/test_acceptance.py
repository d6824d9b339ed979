"""Acceptance criteria, one test per criterion, at the stated tolerances.

Each test finishes by printing a single PASS line with the measured
numbers (run pytest with -rA or -s to see them for passing tests).
"""

import math
import random
import time

from heckesum.charsum import (
    m0_term,
    nondegenerate_poisson_moduli,
    poisson_identity_sides,
    s2_direct,
    s2_poisson,
    zeta_K,
)
from heckesum.gauss_sum import g2_closed, g2_naive_many
from heckesum.gint import GaussianInt, gcd, primary_in_norm_range
from heckesum.series import K1_TEST_SET, verify_factorization
from heckesum.smooth import SmoothWeight, integral, w_tilde
from heckesum.suites import ORACLE_K_SET
from heckesum.symbols import quadratic_symbol

PHI = SmoothWeight()
W = SmoothWeight()

CATALAN = 0.915965594177219015054603514932


def _report(name: str, detail: str) -> None:
    print(f"PASS {name}: {detail}")


def test_gauss_sum_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    pairs = 0
    for n in primary_in_norm_range(0, 1500.5):
        nn = n.norm()
        naive = g2_naive_many(list(ORACLE_K_SET), n)
        for k, nv in zip(ORACLE_K_SET, naive):
            cv = g2_closed(k, n).value
            assert abs(nv - cv) <= 1e-6 * nn, (k, n)
            worst = max(worst, abs(nv - cv) / nn)
            pairs += 1
    elapsed = time.perf_counter() - t0
    assert elapsed <= 60.0
    _report(
        "gauss-sum oracle",
        f"{pairs} (k, n) pairs with N(n) <= 1500, worst |naive-closed|/N(n) "
        f"= {worst:.2e}, {elapsed:.1f}s",
    )


def test_twist_identity():
    rng = random.Random(20260810)
    moduli = primary_in_norm_range(1.5, 2000)
    done = 0
    while done < 300:
        n = rng.choice(moduli)
        r = GaussianInt(rng.randint(-9, 9), rng.randint(-9, 9))
        s = GaussianInt(rng.randint(-9, 9), rng.randint(-9, 9))
        if s.is_zero() or not gcd(s, n).is_unit():
            continue
        done += 1
        lhs = g2_closed(r * s, n).exact
        rhs = g2_closed(r, n).exact.scale(quadratic_symbol(s, n))
        assert lhs == rhs
    _report("twist identity", "300 random (r, s, n) triples, exact surd equality")


def test_poisson_identity():
    xs = (10.0, 100.0)
    moduli = nondegenerate_poisson_moduli(20, 200.5, xs, W)
    assert len(moduli) == 20 and all(n.norm() <= 200 for n in moduli)
    worst = 0.0
    for n in moduli:
        for x in xs:
            lhs, rhs = poisson_identity_sides(n, x, W, eps_tail=1e-12)
            rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
            assert rel <= 1e-8, (n, x, lhs, rhs)
            worst = max(worst, rel)
    _report(
        "poisson identity",
        f"20 moduli x X in {{10, 100}}, worst relative deviation = {worst:.2e}",
    )


def test_cross_path_identity():
    t0 = time.perf_counter()
    worst = 0.0
    for x, y in ((200.0, 20.0), (2000.0, 100.0), (5000.0, 200.0)):
        d = s2_direct(x, y, PHI, W)
        p = s2_poisson(x, y, PHI, W)
        tol = 1e-6 * max(abs(d.value), x * math.sqrt(y))
        assert abs(d.value - p.value) <= tol, (x, y, d.value, p.value)
        worst = max(worst, abs(d.value - p.value) / max(abs(d.value), 1e-300))
    elapsed = time.perf_counter() - t0
    assert elapsed <= 600.0
    _report(
        "cross-path identity",
        f"(X,Y) in {{(200,20), (2000,100), (5000,200)}}, worst relative "
        f"discrepancy = {worst:.2e}, {elapsed:.1f}s",
    )


def test_constants():
    z2 = zeta_K(2.0)
    target = (math.pi**2 / 6.0) * CATALAN
    assert abs(z2 - target) <= 1e-8
    w0 = w_tilde(W, 0.0)
    mass = integral(W)
    assert abs(w0 - math.pi * mass) <= 1e-9
    _report(
        "constants",
        f"zeta_K(2) = {z2:.12f} vs pi^2/6 * Catalan (diff {abs(z2 - target):.2e}); "
        f"Wi(0) - pi*mass = {abs(w0 - math.pi * mass):.2e}",
    )


def test_asymptotic_trend():
    t0 = time.perf_counter()
    devs = []
    for x in (1e4, 1e5, 1e6):
        y = math.sqrt(x)
        s2 = s2_poisson(x, y, PHI, W).value
        m0 = m0_term(x, y, PHI, W)
        devs.append(abs(s2 / m0 - 1.0))
    elapsed = time.perf_counter() - t0
    assert devs[0] >= devs[1] >= devs[2]
    assert devs[2] <= 0.05
    assert elapsed <= 1800.0
    _report(
        "asymptotic trend",
        f"|S2/M0 - 1| at X = 1e4, 1e5, 1e6 (Y = sqrt(X)): "
        f"{devs[0]:.2e} >= {devs[1]:.2e} >= {devs[2]:.2e} (<= 0.05), {elapsed:.1f}s",
    )


def test_dirichlet_series_factorization():
    worst = 0.0
    for v, w in ((2.0, 2.0), (1.5, 1.5)):
        for k1 in K1_TEST_SET:
            rep = verify_factorization(k1, v, w)
            assert rep.delta <= rep.budget, (k1, v, w, rep.delta, rep.budget)
            assert rep.rel_delta <= 1e-2, (k1, v, w, rep.rel_delta)
            worst = max(worst, rep.rel_delta)
    _report(
        "dirichlet-series factorization",
        f"7 square-free k1 at (v,w) in {{(2,2), (1.5,1.5)}}, worst relative "
        f"delta = {worst:.2e} (tolerance 1e-2, within truncation budgets)",
    )


def test_negative_control_parity_factor():
    x, y = 2000.0, 100.0
    d = s2_direct(x, y, PHI, W)
    good = s2_poisson(x, y, PHI, W)
    broken = s2_poisson(x, y, PHI, W, parity=False)
    rel_tol = 1e-6
    good_rel = abs(d.value - good.value) / abs(d.value)
    broken_rel = abs(d.value - broken.value) / abs(d.value)
    assert good_rel <= rel_tol
    assert broken_rel > 1e3 * rel_tol
    _report(
        "negative control",
        f"dropping the k-parity factor moves the relative discrepancy from "
        f"{good_rel:.2e} to {broken_rel:.2e} (> 1e3 x 1e-6)",
    )
