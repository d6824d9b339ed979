import math
from fractions import Fraction

import numpy as np
import pytest

from heckesum.charsum import (
    TruncationPolicy,
    WorkBudgetExceeded,
    error_envelope,
    m0_term,
    main_term_candidates,
    pairwise_sum,
    poisson_identity_sides,
    run_s2,
    s2_direct,
    s2_poisson,
    theta,
    zeta_K,
)
from heckesum.charsum import _direct_partial
from heckesum.gint import (
    GaussianInt,
    RAMIFIED,
    odd_in_norm_range,
    primary_in_norm_range,
)
from heckesum.smooth import SmoothWeight
from heckesum.symbols import quadratic_symbol

PHI = SmoothWeight()
W = SmoothWeight()

CATALAN = 0.915965594177219015054603514932


def test_theta_constant():
    assert theta() == Fraction(131, 416)
    assert abs(float(theta()) - 0.31490384615384615) < 1e-16


def test_pairwise_sum_basics():
    vals = [0.1 * k for k in range(101)]
    assert abs(pairwise_sum(vals) - math.fsum(vals)) < 1e-12
    assert pairwise_sum([]) == 0.0
    # exact zeros do not perturb the pairwise tree
    with_zeros = [1.0, 0.0, 2.0, 0.0, 3.0, 0.0, 0.0, 4.0]
    assert pairwise_sum(with_zeros) == pairwise_sum([1.0, 2.0, 3.0, 4.0])


def _naive_reference(x, y, phi, w):
    """Per-pair direct sum: fresh symbol per (m, n), plain fsum."""
    total = []
    for n in primary_in_norm_range(y * phi.support[0], y * phi.support[1]):
        xr, xi, nrm = odd_in_norm_range(x * w.support[0], x * w.support[1])
        for a, b, nm in zip(xr, xi, nrm):
            m = GaussianInt(int(a), int(b))
            s = quadratic_symbol(RAMIFIED * m, n)
            if s:
                total.append(s * phi(n.norm() / y) * w(int(nm) / x))
    return math.fsum(total)


def test_direct_against_naive_reference():
    got = s2_direct(200.0, 20.0, PHI, W).value
    want = _naive_reference(200.0, 20.0, PHI, W)
    assert abs(got - want) <= 1e-9


def test_direct_empty_and_bilinear():
    assert s2_direct(200.0, 0.5, PHI, W).value == 0.0
    base = s2_direct(150.0, 18.0, PHI, W).value
    doubled = s2_direct(
        150.0, 18.0, SmoothWeight(amplitude=2.0), SmoothWeight(amplitude=2.0)
    ).value
    assert doubled == 4.0 * base


def test_direct_euler_path_matches_table_path():
    n = GaussianInt(-4, 5)  # norm 41
    xr, xi, nrm = odd_in_norm_range(0, 150.0)
    wvals = np.asarray(W(nrm / 150.0))
    a = _direct_partial(n, xr, xi, wvals, use_table=True)
    b = _direct_partial(n, xr, xi, wvals, use_table=False)
    assert abs(a - b) < 1e-12


def test_work_budget():
    with pytest.raises(WorkBudgetExceeded):
        s2_direct(200.0, 20.0, PHI, W, TruncationPolicy(work_budget=10))


def test_cross_path_identity_small():
    d = s2_direct(200.0, 20.0, PHI, W)
    p = s2_poisson(200.0, 20.0, PHI, W)
    tol = 1e-6 * max(abs(d.value), 200.0 * math.sqrt(20.0))
    assert abs(d.value - p.value) <= tol


def test_poisson_zero_frequency_only_equals_m0():
    p = s2_poisson(300.0, 25.0, PHI, W, TruncationPolicy(k_norm_cap=0))
    m0 = m0_term(300.0, 25.0, PHI, W)
    assert p.value == p.m0 == m0


def test_m0_equals_poisson_zero_term_exactly():
    for x, y in ((200.0, 20.0), (1000.0, 64.0)):
        p = s2_poisson(x, y, PHI, W)
        assert m0_term(x, y, PHI, W) == p.m0


def test_m0_scaling_in_x():
    base = m0_term(500.0, 30.0, PHI, W)
    assert m0_term(1000.0, 30.0, PHI, W) == 2.0 * base


def test_m0_single_term_case():
    # only l = 1 qualifies: value is (X Wi(0) / 2) Phi(1/Y)
    from heckesum.smooth import w_tilde

    x, y = 100.0, 4.0
    want = 0.5 * x * w_tilde(W, 0.0) * PHI(1.0 / y)
    assert abs(m0_term(x, y, PHI, W) - want) < 1e-18


def test_truncation_stability():
    policy = TruncationPolicy()
    p1 = s2_poisson(200.0, 20.0, PHI, W, policy)
    doubled = TruncationPolicy(k_norm_cap=2 * p1.k_cap)
    p2 = s2_poisson(200.0, 20.0, PHI, W, doubled)
    assert abs(p1.value - p2.value) <= 10 * policy.eps_tail * 200.0 * p1.n_count


def test_parity_negative_control_small():
    good = s2_poisson(200.0, 20.0, PHI, W)
    broken = s2_poisson(200.0, 20.0, PHI, W, parity=False)
    d = s2_direct(200.0, 20.0, PHI, W)
    assert abs(d.value - good.value) <= 1e-6 * max(abs(d.value), 200 * math.sqrt(20))
    assert abs(d.value - broken.value) / abs(d.value) > 1e-3


def test_poisson_identity_unit_modulus():
    lhs, rhs = poisson_identity_sides(GaussianInt(1, 0), 100.0, W)
    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_zeta_examples():
    z2 = zeta_K(2.0)
    assert abs(z2 - (math.pi**2 / 6.0) * CATALAN) < 1e-8
    z4 = zeta_K(4.0)
    assert 1.0 < z4 < z2
    assert abs(zeta_K(12.0, prime_bound=10**6) - 1.0) < 3e-4
    with pytest.raises(ValueError):
        zeta_K(1.0)


def test_candidates_discrimination():
    # Phi supported away from 1/2 kills the pointwise reading only
    phi_off = SmoothWeight(support=(1.0, 2.0))
    c = main_term_candidates(1e4, 1e2, phi_off, W, zeta_prime_bound=10**6)
    assert c["paper_pointwise"] == 0.0
    assert c["m0_direct"] != 0.0
    assert c["closest_to_m0"] == "mellin_variant"

    c = main_term_candidates(1e4, 1e2, PHI, W, zeta_prime_bound=10**6)
    zk = zeta_K(2.0, 10**6)
    from heckesum.smooth import w_tilde

    base = math.pi / (24 * zk) * w_tilde(W, 0.0) * 1e4 * math.sqrt(1e2)
    assert abs(c["paper_pointwise"] - base * math.exp(-4)) < 1e-12 * abs(base)
    assert c["closest_to_m0"] in ("paper_pointwise", "mellin_variant")


def test_error_envelope():
    v = error_envelope(1e4, 1e2)
    th = float(theta())
    want = 1e2 ** ((th - 1) / 2) + (1e2 / 1e4) ** 1.01
    assert abs(v - want) < 1e-12 * want
    # non-increasing along the Y = sqrt(X) diagonal
    vals = [error_envelope(x, x**0.5) for x in (1e4, 1e5, 1e6)]
    assert vals == sorted(vals, reverse=True)


def test_threads_bitwise_identical():
    d1 = s2_direct(200.0, 20.0, PHI, W, threads=1)
    d2 = s2_direct(200.0, 20.0, PHI, W, threads=2)
    assert d1.value == d2.value
    p1 = s2_poisson(200.0, 20.0, PHI, W, threads=1)
    p2 = s2_poisson(200.0, 20.0, PHI, W, threads=2)
    assert p1.value == p2.value and p1.m0 == p2.m0


def test_run_s2_report():
    rep = run_s2(
        200.0, 20.0, PHI, W, method="both", with_candidates=True,
        zeta_prime_bound=10**6,
    )
    assert rep.discrepancy is not None and rep.discrepancy < 1e-8
    assert rep.m0 == m0_term(200.0, 20.0, PHI, W)
    text = rep.to_json()
    assert '"s2_direct"' in text and '"candidates"' in text
    assert text == rep.to_json()  # rendering is deterministic
    with pytest.raises(ValueError):
        run_s2(10.0, 10.0, PHI, W, method="fancy")
