import math
import random

import numpy as np
import pytest

from heckesum.gauss_sum import (
    G2Evaluator,
    GaussSumValue,
    e_tilde,
    g2_closed,
    g2_naive,
    g2_naive_many,
    phi,
)
from heckesum.gint import (
    GaussianInt,
    IUNIT,
    ONE,
    RAMIFIED,
    SurdValue,
    ZERO,
    gcd,
    primary_in_norm_range,
)
from heckesum.suites import ORACLE_K_SET
from heckesum.symbols import quadratic_symbol

W = GaussianInt(-1, 2)


def test_e_tilde_examples():
    assert e_tilde(GaussianInt(7, 0), 3) == 1.0
    assert e_tilde(GaussianInt(0, 1), 1) == 1.0
    v = e_tilde(GaussianInt(0, 1), 4)
    assert abs(v - 1j) < 1e-15
    with pytest.raises(ZeroDivisionError):
        e_tilde(ONE, 0)


def test_e_tilde_phase_reduction_is_exact():
    # huge imaginary parts reduce mod den before any float work
    big = GaussianInt(3, 10**15 + 1)
    assert abs(e_tilde(big, 4) - 1j) < 1e-15


def test_g2_examples():
    assert g2_naive(GaussianInt(1, 0), ONE).value == 1.0
    assert abs(g2_naive(GaussianInt(1, 0), W).value + math.sqrt(5)) < 1e-9
    assert abs(g2_naive(ZERO, W).value) < 1e-9
    assert g2_closed(GaussianInt(1, 0), W).exact == SurdValue(-1, 5)
    assert g2_closed(ZERO, W * W).exact == SurdValue(20, 1)
    assert g2_closed(W, W * W).exact == SurdValue(-5, 1)
    assert g2_closed(ZERO, ONE).exact == SurdValue(1, 1)
    with pytest.raises(ValueError):
        g2_naive(ONE, GaussianInt(3, 0))  # not primary
    with pytest.raises(ValueError):
        g2_closed(ONE, GaussianInt(1, 2))


def test_phi_examples():
    assert phi(ONE) == 1
    assert phi(W) == 4
    assert phi(W * W) == 20
    assert phi(RAMIFIED) == 1
    assert phi(GaussianInt(2, 0)) == 2
    with pytest.raises(ValueError):
        phi(ZERO)


def test_oracle_equivalence_small():
    for n in primary_in_norm_range(0, 500):
        nn = n.norm()
        naive = g2_naive_many(list(ORACLE_K_SET), n)
        for k, nv in zip(ORACLE_K_SET, naive):
            cv = g2_closed(k, n).value
            assert abs(nv - cv) <= 1e-6 * nn, (k, n, nv, cv)


def test_g2_naive_many_matches_singletons():
    for n in (ONE, W, W * W, GaussianInt(-3, 0) * W):
        many = g2_naive_many(list(ORACLE_K_SET), n)
        for k, v in zip(ORACLE_K_SET, many):
            assert v == g2_naive(k, n).value


def test_twist_identity_exact():
    rng = random.Random(99)
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


def test_multiplicativity_exact():
    prim = primary_in_norm_range(1.5, 120)
    pairs = 0
    for i, m in enumerate(prim):
        for n in prim[i + 1 :]:
            if not gcd(m, n).is_unit():
                continue
            pairs += 1
            for k in (ZERO, ONE, RAMIFIED, GaussianInt(-1, 2)):
                lhs = g2_closed(k, m * n).exact
                rhs = g2_closed(k, m).exact * g2_closed(k, n).exact
                assert lhs == rhs
    assert pairs > 50


def test_magnitude_bound():
    for n in primary_in_norm_range(0, 700):
        for k in ORACLE_K_SET:
            assert abs(g2_closed(k, n).value) <= n.norm() * (1 + 1e-12)


def test_unit_square_independence():
    rng = random.Random(7)
    moduli = primary_in_norm_range(1.5, 600)
    for _ in range(200):
        n = rng.choice(moduli)
        k1 = GaussianInt(rng.randint(-5, 5), rng.randint(-5, 5))
        k2 = GaussianInt(rng.randint(-6, 6), rng.randint(-6, 6))
        base = g2_closed(k1 * k2 * k2, n).exact
        for u in (IUNIT, GaussianInt(-1, 0), GaussianInt(0, -1)):
            uk = u * k2
            assert g2_closed(k1 * uk * uk, n).exact == base


def test_gauss_sum_value_consistency_check():
    with pytest.raises(AssertionError):
        GaussSumValue(exact=SurdValue(2, 5), value=1.0)


def test_evaluator_matches_closed_form():
    rng = np.random.default_rng(12)
    for n in primary_in_norm_range(1.5, 400):
        ev = G2Evaluator(n)
        assert ev.zero_value == g2_closed(ZERO, n).value
        kr = rng.integers(-25, 26, size=120).astype(np.int64)
        ki = rng.integers(-25, 26, size=120).astype(np.int64)
        mask = (kr != 0) | (ki != 0)
        kr, ki = kr[mask], ki[mask]
        vec = ev.eval_many(kr, ki)
        for a, b, v in zip(kr, ki, vec):
            k = GaussianInt(int(a), int(b))
            want = g2_closed(k, n).value
            assert abs(v - want) <= 1e-12 * max(1.0, abs(want))
            assert abs(ev(k) - want) <= 1e-12 * max(1.0, abs(want))
