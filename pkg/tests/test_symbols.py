import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heckesum.gint import (
    GaussianInt,
    IUNIT,
    ONE,
    RAMIFIED,
    ZERO,
    gcd,
    primary_in_norm_range,
)
from heckesum.symbols import (
    SymbolTable,
    chi,
    quadratic_prime,
    quadratic_symbol,
    quartic_prime,
    quartic_symbol,
)

W = GaussianInt(-1, 2)  # primary prime of norm 5


def test_quartic_prime_examples():
    assert quartic_prime(IUNIT, W) == 1j
    assert quartic_prime(ONE, W) == 1
    assert quartic_prime(W * GaussianInt(4, 1), W) == 0
    with pytest.raises(ValueError):
        quartic_prime(ONE, RAMIFIED)
    # a non-prime modulus where a^((N-1)/4) misses every root of unity
    with pytest.raises(ValueError):
        quartic_prime(GaussianInt(2, 0), GaussianInt(9, 0))


def test_quadratic_symbol_examples():
    assert quadratic_symbol(IUNIT, W) == -1
    assert quadratic_symbol(GaussianInt(9, -7), ONE) == 1
    assert quadratic_symbol(ZERO, ONE) == 1
    assert quadratic_symbol(GaussianInt(2, 0), W) == -1
    with pytest.raises(ValueError):
        quadratic_symbol(ONE, RAMIFIED)
    with pytest.raises(ValueError):
        quadratic_symbol(ONE, ZERO)


def test_quadratic_prime_is_square_of_quartic():
    rng = random.Random(5)
    primes = [p for p in primary_in_norm_range(1.5, 600) if _is_prime(p)]
    for _ in range(150):
        p = rng.choice(primes)
        a = GaussianInt(rng.randint(-30, 30), rng.randint(-30, 30))
        assert quadratic_prime(a, p) == complex(quartic_prime(a, p) ** 2).real


def _is_prime(n):
    from heckesum.gint import factor

    f = factor(n)
    return f.ramified_exp == 0 and len(f.factors) == 1 and f.factors[0][1] == 1


def test_chi_factory():
    principal = chi(ONE)
    for n in primary_in_norm_range(0, 150):
        assert principal(n) == 1
    assert chi(IUNIT * IUNIT**3)(GaussianInt(-1, 6)) == 1
    # reciprocity-flavoured example: both orders agree
    assert chi(W)(GaussianInt(3, 0)) == chi(GaussianInt(-3, 0))(W)


def test_multiplicativity_in_numerator():
    rng = random.Random(42)
    moduli = primary_in_norm_range(1.5, 10**4)
    for _ in range(500):
        n = rng.choice(moduli)
        a = GaussianInt(rng.randint(-50, 50), rng.randint(-50, 50))
        b = GaussianInt(rng.randint(-50, 50), rng.randint(-50, 50))
        assert quadratic_symbol(a * b, n) == quadratic_symbol(a, n) * quadratic_symbol(b, n)


def test_multiplicativity_in_denominator():
    rng = random.Random(43)
    moduli = primary_in_norm_range(1.5, 300)
    for _ in range(200):
        m, n = rng.choice(moduli), rng.choice(moduli)
        if not gcd(m, n).is_unit():
            continue
        a = GaussianInt(rng.randint(-40, 40), rng.randint(-40, 40))
        assert quadratic_symbol(a, m * n) == quadratic_symbol(a, m) * quadratic_symbol(a, n)


def test_quadratic_reciprocity_exhaustive():
    prim = primary_in_norm_range(1.5, 2000)
    for i, m in enumerate(prim):
        for n in prim[i + 1 :]:
            if not gcd(m, n).is_unit():
                continue
            assert quadratic_symbol(m, n) == quadratic_symbol(n, m)


def test_square_triviality():
    rng = random.Random(44)
    moduli = primary_in_norm_range(1.5, 2000)
    for _ in range(300):
        n = rng.choice(moduli)
        k2 = GaussianInt(rng.randint(-20, 20), rng.randint(-20, 20))
        if k2.is_zero() or not gcd(k2, n).is_unit():
            continue
        assert quadratic_symbol(k2 * k2, n) == 1


@given(
    st.integers(-30, 30),
    st.integers(-30, 30),
    st.integers(-5, 5),
)
def test_periodicity(ar, ai, t):
    n = GaussianInt(-3, 4)  # fixed odd modulus of norm 25
    a = GaussianInt(ar, ai)
    assert quadratic_symbol(a, n) == quadratic_symbol(a + n * GaussianInt(t, 2 * t), n)


def test_symbol_independent_of_associate():
    rng = random.Random(45)
    moduli = primary_in_norm_range(1.5, 800)
    from heckesum.gint import UNITS

    for _ in range(200):
        n = rng.choice(moduli)
        a = GaussianInt(rng.randint(-30, 30), rng.randint(-30, 30))
        for u in UNITS:
            assert quadratic_symbol(a, u * n) == quadratic_symbol(a, n)


def test_quartic_symbol_composite():
    # multiplicative extension over a norm-45 modulus
    n = GaussianInt(-3, 0) * W
    a = GaussianInt(2, 1)
    expect = quartic_prime(a, GaussianInt(-3, 0)) * quartic_prime(a, W)
    assert quartic_symbol(a, n) == expect
    assert quartic_symbol(a, ONE) == 1


def test_symbol_table_matches_scalar():
    rng = random.Random(46)
    for n in (W, GaussianInt(-3, 0), GaussianInt(-3, 0) * W, W * W):
        table = SymbolTable(n)
        xr = np.array([rng.randint(-60, 60) for _ in range(200)], dtype=np.int64)
        xi = np.array([rng.randint(-60, 60) for _ in range(200)], dtype=np.int64)
        got = table.lookup(xr, xi)
        for a, b, g in zip(xr, xi, got):
            assert int(g) == quadratic_symbol(GaussianInt(int(a), int(b)), n)
