from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowdisc.corebase import Constant, Perm
from lowdisc.discrepancy import (
    disc_1d,
    disc_2d_report,
    local_delta,
    local_delta_anchored,
    prefix_reports,
    sequence_net_sandwich,
    star_disc_1d_sorted,
    star_disc_2d,
    star_disc_2d_bruteforce,
)
from lowdisc.generators import NUTSequence, hammersley, van_der_corput

F = Fraction
fractions01 = st.builds(lambda n, d: F(n % (d + 1), d), st.integers(0, 64), st.integers(1, 16))


def oracle_1d(xs):
    """D+ and D- by scanning a in a fine grid plus left/right limits at the points."""
    n = len(xs)
    cands = set(xs) | {F(1)}
    dplus = F(0)
    dminus = F(0)
    for a in cands:
        closed = sum(x <= a for x in xs) if a < 1 else sum(x < 1 for x in xs)
        opened = sum(x < a for x in xs)
        dplus = max(dplus, closed - n * a)
        dminus = max(dminus, n * a - opened)
    return dplus, dminus


def test_single_point_at_zero():
    r = disc_1d([0])
    assert (r.dplus, r.dminus, r.dstar, r.dextreme) == (1, 0, 1, 1)


def test_single_point_at_half():
    r = disc_1d([F(1, 2)])
    assert (r.dplus, r.dminus, r.dstar, r.dextreme) == (F(1, 2), F(1, 2), F(1, 2), 1)


def test_two_points():
    assert disc_1d([0, F(1, 2)]).dstar == 1
    assert disc_1d([0, F(1, 2), F(1, 4), F(3, 4)]).dstar == 1


def test_point_at_one_never_counted():
    r = disc_1d([1])
    assert r.dminus == 1 and r.dplus == 0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        disc_1d([])
    with pytest.raises(ValueError):
        disc_1d([F(3, 2)])


def test_strings_and_base_rationals_accepted():
    assert disc_1d(["0", "1/2"]).dstar == 1


@given(st.lists(fractions01, min_size=1, max_size=20))
def test_1d_matches_oracle(xs):
    r = disc_1d(xs)
    assert (r.dplus, r.dminus) == oracle_1d(xs)
    assert r.dstar == max(r.dplus, r.dminus)
    assert r.dextreme == r.dplus + r.dminus


@given(st.lists(fractions01.filter(lambda x: x < 1), min_size=1, max_size=20))
def test_sorted_formula_matches_sweep(xs):
    assert star_disc_1d_sorted(xs) == disc_1d(xs).dstar


@given(st.lists(fractions01, min_size=1, max_size=12))
def test_prefix_reports_match_direct(xs):
    reps = prefix_reports(xs)
    assert [r.dstar for r in reps] == [disc_1d(xs[:n]).dstar for n in range(1, len(xs) + 1)]


def test_large_denominators_stay_exact():
    S = NUTSequence(Constant(Perm.identity(3)))
    xs = S.exact_prefix(5)
    pts = xs + [F(1, 3**64)]
    r = disc_1d(pts)
    assert (r.dplus, r.dminus) == oracle_1d(pts)


# --------------------------------------------------------------------------
# two dimensions


def test_2d_examples():
    assert star_disc_2d([(F(0), F(0)), (F(1, 2), F(1, 2))]) == F(3, 2)
    assert star_disc_2d([(F(0), F(0))]) == 1


def test_local_delta_examples():
    assert local_delta(hammersley(2, 2), [(0, 1), (0, 1)]) == 0
    assert local_delta([F(0)], [(0, F(1, 2))]) == F(1, 2)
    assert local_delta_anchored(hammersley(2, 2), [F(1, 2), F(1, 2)]) == 0
    with pytest.raises(ValueError):
        local_delta([F(0)], [(F(1, 2), F(1, 4))])


points2d = st.lists(st.tuples(fractions01, fractions01), min_size=1, max_size=14)


@given(points2d)
def test_sweep_matches_bruteforce(pts):
    assert star_disc_2d(pts) == star_disc_2d_bruteforce(pts)


@given(points2d)
def test_transposition_invariance(pts):
    assert star_disc_2d(pts) == star_disc_2d([(y, x) for x, y in pts])


@settings(max_examples=25)
@given(points2d, st.lists(st.tuples(fractions01, fractions01), min_size=1, max_size=10))
def test_dstar_dominates_sampled_boxes(pts, corners):
    d = star_disc_2d(pts)
    for a, c in corners:
        if a > 0 and c > 0:
            assert abs(local_delta_anchored(pts, [a, c])) <= d


@pytest.mark.parametrize("b,m", [(2, 3), (2, 5), (3, 3), (5, 2)])
def test_hammersley_sweep_vs_bruteforce(b, m):
    P = hammersley(b, m)
    assert star_disc_2d(P) == star_disc_2d_bruteforce(P)
    r = disc_2d_report(P)
    assert r.dstar == max(r.dplus, r.dminus) and r.dextreme is None


def test_2d_rejects_outside_points():
    with pytest.raises(ValueError):
        star_disc_2d([(F(3, 2), F(0))])


@given(points2d)
def test_projection_bounds_2d(pts):
    # boxes [0, a) x [0, 1) see the first coordinate alone
    assert star_disc_2d(pts) >= disc_1d([x for x, _ in pts]).dstar - sum(y == 1 for _, y in pts)


# --------------------------------------------------------------------------
# sequence versus net


@pytest.mark.parametrize("S", [van_der_corput(2), NUTSequence(Constant(Perm.identity(3))), NUTSequence(Constant(Perm((1, 0))))])
@pytest.mark.parametrize("N", [1, 4, 8, 9, 27])
def test_sandwich(S, N):
    r = sequence_net_sandwich(S, N)
    assert r.ok
    assert r.max_prefix <= r.net_dstar <= r.max_prefix + 1


def test_sandwich_rejects_bad_n():
    with pytest.raises(ValueError):
        sequence_net_sandwich(van_der_corput(2), 0)
