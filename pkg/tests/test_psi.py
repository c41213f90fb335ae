from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowdisc.corebase import Constant, ExplicitThenTail, Perm
from lowdisc.discrepancy import disc_1d, prefix_reports
from lowdisc.generators import GenMatrix, NUTSequence
from lowdisc.psi import (
    PiecewiseLinear,
    alpha,
    alpha_pm,
    closed_form_alpha,
    envelope,
    formula_disc,
    hammersley_psi_maxima,
    phi,
    psi_fns,
    scale_sums_max,
    theta,
)

F = Fraction
ID2, TAU2 = Perm.identity(2), Perm((1, 0))


def dist(x):
    f = x - (x.numerator // x.denominator)
    return min(f, 1 - f)


def random_perm(b, rng):
    return Perm(tuple(int(v) for v in rng.permutation(b)))


def random_sigmas(b, rng, head=4):
    return ExplicitThenTail(tuple(random_perm(b, rng) for _ in range(int(rng.integers(0, head + 1)))), random_perm(b, rng))


grid = [F(k, 24) for k in range(24)] + [F(7, 5), F(-1, 3)]


# --------------------------------------------------------------------------
# phi and psi


@pytest.mark.parametrize("b", [2, 3, 5])
def test_phi_h_zero_vanishes(b):
    assert all(phi(b, Perm.identity(b), 0)(x) == 0 for x in grid)


def test_phi_base2_identity():
    f = phi(2, ID2, 1)
    assert f(F(1, 4)) == F(1, 4)
    assert f(F(3, 4)) == F(1, 4)
    assert f(F(1, 2)) == F(1, 2)


def test_phi_base3_example():
    assert phi(3, Perm.identity(3), 1)(F(1, 2)) == F(1, 2)


def test_phi_matches_direct_count():
    # on [(k-1)/b, k/b), with A counting sigma(0), ..., sigma(k-1):
    # A([0, h)) - h x if h <= sigma(k-1), else (b - h) x - A([h, b))
    rng = np.random.default_rng(3)
    for b in (3, 4, 7):
        sigma = random_perm(b, rng)
        for h in range(b):
            f = phi(b, sigma, h)
            for x in [F(j, 5 * b) for j in range(5 * b)]:
                k = int(x * b) + 1
                low = sum(sigma(i) < h for i in range(k))
                want = low - h * x if h <= sigma(k - 1) else (b - h) * x - (k - low)
                assert f(x) == want


def test_phi_rejects_bad_h():
    with pytest.raises(ValueError):
        phi(2, ID2, 2)


def test_psi_base2():
    plus, minus, both = psi_fns(2, ID2)
    assert all(plus(x) == dist(x) and minus(x) == 0 for x in grid)
    plus, minus, _ = psi_fns(2, TAU2)
    assert all(minus(x) == dist(x) and plus(x) == 0 for x in grid)


@pytest.mark.parametrize("b", range(2, 11))
def test_psi_is_sum_of_parts(b):
    rng = np.random.default_rng(b)
    for _ in range(10):
        sigma = random_perm(b, rng)
        plus, minus, both = psi_fns(b, sigma)
        assert both == plus + minus
        assert both(0) == 0
        assert both.is_continuous()
        for x in grid:
            assert plus(x) == max(phi(b, sigma, h)(x) for h in range(b))
            assert minus(x) == max(-phi(b, sigma, h)(x) for h in range(b))


def test_piecewise_linear_validation():
    with pytest.raises(ValueError):
        PiecewiseLinear((F(0), F(1, 2)), (F(0),), (F(0),))
    with pytest.raises(ValueError):
        PiecewiseLinear((F(0), F(1)), (F(0), F(1)), (F(0),))
    c = PiecewiseLinear.constant(3)
    assert c(F(5, 7)) == 3 and c.segments == 1


def test_envelope_inserts_crossings():
    up = PiecewiseLinear((F(0), F(1)), (F(1),), (F(0),))
    down = PiecewiseLinear((F(0), F(1)), (F(-1),), (F(1),))
    env = envelope([up, down])
    assert env(F(1, 2)) == F(1, 2)
    assert env(F(1, 4)) == F(3, 4)
    assert F(1, 2) in env.breakpoints


# --------------------------------------------------------------------------
# theta and the exact formula


def test_theta_examples():
    C = GenMatrix(2, "strict-upper", {0: {1: 1}})
    assert theta(C, 2, 0, 3) == 1
    assert theta(C, 2, 0, 1) == 0
    assert theta(GenMatrix.zero(3), 3, 0, 17) == 0
    with pytest.raises(ValueError):
        theta(C, 2, 0, 0)


def test_theta_vanishes_past_digit_count():
    rng = np.random.default_rng(0)
    C = GenMatrix.random_strict_upper(3, 8, rng)
    for N in range(1, 3**4 + 1):
        for r in range(3, 8):
            assert theta(C, 3, r, N) == 0


def test_single_point_extreme_discrepancy():
    r = formula_disc(Constant(ID2), None, 2, 1)
    assert r.dextreme == 1
    assert r.dstar == disc_1d([0]).dstar


@pytest.mark.parametrize("b", [2, 3, 5])
def test_formula_matches_oracle(b):
    rng = np.random.default_rng(40 + b)
    for _ in range(4):
        sigmas = random_sigmas(b, rng)
        C = GenMatrix.random_strict_upper(b, 6, rng)
        xs = NUTSequence(sigmas, C).exact_prefix(120)
        for N, ref in enumerate(prefix_reports(xs), start=1):
            got = formula_disc(sigmas, C, b, N)
            assert (got.dplus, got.dminus, got.dstar, got.dextreme) == (ref.dplus, ref.dminus, ref.dstar, ref.dextreme)


@given(st.integers(2, 5), st.integers(1, 300), st.integers(0, 2**31))
def test_extreme_discrepancy_ignores_matrix(b, N, seed):
    rng = np.random.default_rng(seed)
    sigmas = random_sigmas(b, rng)
    C = GenMatrix.random_strict_upper(b, 6, rng)
    assert formula_disc(sigmas, C, b, N).dextreme == formula_disc(sigmas, None, b, N).dextreme


@pytest.mark.parametrize("b", [2, 3])
def test_identity_star_equals_extreme(b):
    for N in range(1, 257):
        r = formula_disc(Constant(Perm.identity(b)), None, b, N)
        assert r.dstar == r.dextreme


def test_formula_rejects_non_strict_matrix():
    with pytest.raises(ValueError):
        formula_disc(Constant(ID2), GenMatrix.identity(2, 3), 2, 4)
    with pytest.raises(ValueError):
        formula_disc(Constant(ID2), None, 2, 0)


# --------------------------------------------------------------------------
# asymptotic constants


def test_closed_forms():
    assert closed_form_alpha(2) == F(1, 3)
    assert closed_form_alpha(3) == F(1, 2)


def test_alpha_first_term():
    est = alpha(2, ID2, 1)
    assert est.values[0] == F(1, 2)
    assert est.estimate == F(1, 2) >= closed_form_alpha(2)


@pytest.mark.parametrize("b", [2, 3])
def test_alpha_estimates_from_above(b):
    est = alpha(b, Perm.identity(b), 6)
    assert closed_form_alpha(b) <= est.estimate <= F(11, 10) * closed_form_alpha(b)


def test_alpha_subadditive():
    rng = np.random.default_rng(9)
    for b in (2, 3, 4):
        est = alpha(b, random_perm(b, rng), 5)
        a = est.values
        for n in range(1, 6):
            for m in range(1, 6 - n):
                assert a[n + m - 1] <= a[n - 1] + a[m - 1]


def test_alpha_pm_base2_identity():
    plus, minus = alpha_pm(2, ID2, 8)
    assert F(1, 3) <= plus.estimate < F(1, 3) * F(11, 10)
    assert minus.estimate == 0
    assert (plus.estimate + minus.estimate) / 2 >= F(1, 6)


def test_alpha_budget_and_validation():
    with pytest.raises(OverflowError):
        alpha(2, ID2, 10, budget=100)
    with pytest.raises(ValueError):
        alpha(2, ID2, 0)


def test_scale_sums_brute_force():
    plus, _, _ = psi_fns(3, Perm((2, 0, 1)))
    for n in (1, 2, 3):
        pts = [F(k, 3 * 3**n * 6) for k in range(3**n * 3 * 6 * 3)]
        brute = max(sum(plus(x / 3**j) for j in range(1, n + 1)) for x in pts)
        assert scale_sums_max(plus, 3, n) >= brute


def test_hammersley_psi_maxima_base2():
    # sum_{j<=m} ||n / 2^j|| maximized over n
    for m in (1, 2, 5):
        plus, minus = hammersley_psi_maxima(2, [ID2] * m)
        brute = max(sum(dist(F(n, 2**j)) for j in range(1, m + 1)) for n in range(1, 2**m + 1))
        assert plus == brute and minus == 0
