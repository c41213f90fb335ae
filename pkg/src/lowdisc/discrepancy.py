"""Exact discrepancy of finite point sets in one and two dimensions.

All values are unnormalized: the supremum of |A(J) - N vol(J)| where A(J)
counts points in the box J.  Inputs may be BaseRationals, Fractions, ints or
"p/q" strings; multisets are fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

import numba
import numpy as np

from .corebase import as_fraction
from .generators import DigitSequence, PointSet2D


@dataclass(frozen=True)
class DiscReport:
    """Exact unnormalized discrepancies of an N-point set.

    ``dextreme`` is only filled for one-dimensional sets.
    """

    N: int
    dplus: Fraction
    dminus: Fraction
    dstar: Fraction
    dextreme: Fraction | None
    method: str = "oracle"

    def to_json(self) -> dict:
        out = {
            "N": self.N,
            "dplus": _frac_str(self.dplus),
            "dminus": _frac_str(self.dminus),
            "dstar": _frac_str(self.dstar),
            "method": self.method,
        }
        if self.dextreme is not None:
            out["d"] = _frac_str(self.dextreme)
        return out


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _values_1d(points: Iterable) -> list[Fraction]:
    out = []
    for p in points:
        if isinstance(p, tuple):
            if len(p) != 1:
                raise ValueError("expected one-dimensional points")
            p = p[0]
        out.append(as_fraction(p))
    return out


def _points_nd(P) -> list[tuple[Fraction, ...]]:
    if isinstance(P, PointSet2D):
        return P.fractions()
    out = []
    for p in P:
        if isinstance(p, tuple):
            out.append(tuple(as_fraction(c) for c in p))
        else:
            out.append((as_fraction(p),))
    return out


# --------------------------------------------------------------------------
# local discrepancy


def local_delta(P, box: Sequence[tuple]) -> Fraction:
    """A(J) - N vol(J) for the half-open box J = prod [lo_j, hi_j)."""
    pts = _points_nd(P)
    bounds = [(as_fraction(lo), as_fraction(hi)) for lo, hi in box]
    for lo, hi in bounds:
        if not (0 <= lo < hi <= 1):
            raise ValueError(f"malformed box side [{lo}, {hi})")
    if pts and len(pts[0]) != len(bounds):
        raise ValueError("box dimension does not match the points")
    count = sum(all(lo <= c < hi for c, (lo, hi) in zip(p, bounds)) for p in pts)
    vol = Fraction(1)
    for lo, hi in bounds:
        vol *= hi - lo
    return count - len(pts) * vol


def local_delta_anchored(P, corner: Sequence) -> Fraction:
    """Local discrepancy of the anchored box [0, corner)."""
    return local_delta(P, [(0, c) for c in corner])


# --------------------------------------------------------------------------
# one dimension


def _scaled(values: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in values], den


def _report_from_sorted(s, den: int, n: int, method: str) -> DiscReport:
    """Exact D+, D-, D from sorted integer numerators s over denominator den."""
    s = np.asarray(s)
    if s.dtype != object and n * den >= 2**62:
        s = s.astype(object)
    le = np.searchsorted(s, s, side="right")
    lt = np.searchsorted(s, s, side="left")
    if s.dtype == object:
        le, lt = le.astype(object), lt.astype(object)
    below_one = s < den
    # Delta just to the right of each point (closed count) and just to its left (open count)
    right = le * den - n * s
    left = lt * den - n * s
    at_one = int(np.count_nonzero(below_one)) * den - n * den
    hi = max([0] + [int(v) for v in right[below_one]])
    lo = min([0, at_one] + [int(v) for v in left])
    dplus = Fraction(hi, den)
    dminus = Fraction(-lo, den)
    # every interval [a, c) has discrepancy Delta(c) - Delta(a); its sup is max - min over the grid
    vals = [0, at_one] + [int(v) for v in right[below_one]] + [int(v) for v in left]
    dext = Fraction(max(vals) - min(vals), den)
    return DiscReport(n, dplus, dminus, max(dplus, dminus), dext, method)


def disc_1d(points: Iterable) -> DiscReport:
    """Exact D+, D-, D* and D of a finite one-dimensional multiset in [0, 1]."""
    vals = _values_1d(points)
    if not vals:
        raise ValueError("empty point set")
    if any(v < 0 or v > 1 for v in vals):
        raise ValueError("points must lie in [0, 1]")
    nums, den = _scaled(vals)
    nums.sort()
    arr = np.array(nums, dtype=np.int64 if max(nums) * len(nums) < 2**62 and den * len(nums) < 2**62 else object)
    return _report_from_sorted(arr, den, len(vals), "oracle")


def prefix_reports(points: Sequence) -> list[DiscReport]:
    """disc_1d of every prefix: entry N-1 describes the first N points."""
    vals = _values_1d(points)
    if not vals:
        return []
    nums, den = _scaled(vals)
    big = den * len(nums) >= 2**62
    dtype = object if big else np.int64
    out = []
    s = np.empty(0, dtype=dtype)
    for n, v in enumerate(nums, start=1):
        s = np.insert(s, np.searchsorted(s, v, side="right"), v)
        out.append(_report_from_sorted(s, den, n, "oracle"))
    return out


def star_disc_1d_sorted(points: Iterable) -> Fraction:
    """1/2 + N max_n |x_(n) - (2n+1)/(2N)| over the sorted points."""
    vals = sorted(_values_1d(points))
    if not vals:
        raise ValueError("empty point set")
    n = len(vals)
    worst = max(abs(2 * n * x - (2 * i + 1)) for i, x in enumerate(vals))
    return Fraction(1, 2) + worst / 2


# --------------------------------------------------------------------------
# two dimensions


@numba.njit(cache=True)
def _rebuild(blk, bsize, nj, aval, slope, ascending, ha, hs, hlen, ptr):
    lo = blk * bsize
    hi = min(lo + bsize, nj)
    h = lo
    for step in range(hi - lo):
        j = lo + step if ascending else hi - 1 - step
        a3 = aval[j]
        s3 = slope[j]
        while h - lo >= 2:
            a1 = ha[h - 2]
            s1 = hs[h - 2]
            if (a1 - a3) * (hs[h - 1] - s1) <= (a1 - ha[h - 1]) * (s3 - s1):
                h -= 1
            else:
                break
        ha[h] = a3
        hs[h] = s3
        h += 1
    hlen[blk] = h - lo
    ptr[blk] = lo


@numba.njit(cache=True)
def _suffix_add(start, step, bsize, nblk, nj, aval, slope, ascending, ha, hs, hlen, ptr, lazy):
    if start >= nj:
        return
    blk0 = start // bsize
    if start == blk0 * bsize:
        lazy[blk0] += step
    else:
        hi = min(blk0 * bsize + bsize, nj)
        for j in range(start, hi):
            aval[j] += step
        _rebuild(blk0, bsize, nj, aval, slope, ascending, ha, hs, hlen, ptr)
    for blk in range(blk0 + 1, nblk):
        lazy[blk] += step


@numba.njit(cache=True)
def _sweep(px, pyidx, ycand, g, kscale, mscale, upper, bsize):
    """Max over the candidate grid of +-count*K + slope_j * X.

    upper=True: closed counts, value count*K - M*X*Y (the D+ side).
    upper=False: open counts, value M*X*Y - count*K (the D- side).
    Each block of candidates keeps the upper envelope of its lines; the
    abscissa X only grows, so every block walks its envelope forward once.
    """
    nj = ycand.shape[0]
    nblk = (nj + bsize - 1) // bsize
    aval = np.zeros(nj, dtype=np.int64)
    slope = np.empty(nj, dtype=np.int64)
    step = kscale if upper else -kscale
    for j in range(nj):
        slope[j] = -mscale * ycand[j] if upper else mscale * ycand[j]
    # slopes increase with j on the lower side and decrease on the upper side
    ascending = not upper
    lazy = np.zeros(nblk, dtype=np.int64)
    ha = np.empty(nblk * bsize, dtype=np.int64)
    hs = np.empty(nblk * bsize, dtype=np.int64)
    hlen = np.zeros(nblk, dtype=np.int64)
    ptr = np.zeros(nblk, dtype=np.int64)
    for blk in range(nblk):
        _rebuild(blk, bsize, nj, aval, slope, ascending, ha, hs, hlen, ptr)

    best = np.int64(0)
    npts = px.shape[0]
    i = 0
    while True:
        last = i >= npts
        t = g if last else px[i]
        gend = i
        if not last:
            while gend < npts and px[gend] == t:
                gend += 1
        if upper and not last:
            for q in range(i, gend):
                _suffix_add(pyidx[q], step, bsize, nblk, nj, aval, slope, ascending, ha, hs, hlen, ptr, lazy)
        for blk in range(nblk):
            p = ptr[blk]
            end = blk * bsize + hlen[blk]
            v = ha[p] + hs[p] * t
            while p + 1 < end:
                vb = ha[p + 1] + hs[p + 1] * t
                if vb >= v:
                    p += 1
                    v = vb
                else:
                    break
            ptr[blk] = p
            v += lazy[blk]
            if v > best:
                best = v
        if last:
            break
        if not upper:
            for q in range(i, gend):
                _suffix_add(pyidx[q] + 1, step, bsize, nblk, nj, aval, slope, ascending, ha, hs, hlen, ptr, lazy)
        i = gend
    return best


def _grid_form(P) -> tuple[np.ndarray, np.ndarray, int, int] | None:
    """Integer numerators over a common denominator, or None if too large for int64."""
    if isinstance(P, PointSet2D):
        return P.xnum, P.ynum, P.denominator, len(P)
    pts = _points_nd(P)
    if any(len(p) != 2 for p in pts):
        raise ValueError("expected two-dimensional points")
    den = 1
    for x, y in pts:
        den = lcm(den, x.denominator, y.denominator)
    if den >= 2**62:
        return None
    xs = np.array([int(x * den) for x, _ in pts], dtype=np.int64)
    ys = np.array([int(y * den) for _, y in pts], dtype=np.int64)
    return xs, ys, den, len(pts)


def star_disc_2d_parts(P) -> tuple[Fraction, Fraction]:
    """(sup of A - N a1 a2, sup of N a1 a2 - A) over anchored boxes, both >= 0."""
    form = _grid_form(P)
    if form is None:
        return _brute_parts(_points_nd(P))
    xs, ys, g, n = form
    if n == 0:
        raise ValueError("empty point set")
    if (xs < 0).any() or (ys < 0).any() or (xs > g).any() or (ys > g).any():
        raise ValueError("points must lie in [0, 1]^2")
    d = gcd(n, g * g)
    kscale = g * g // d
    mscale = n // d
    if n * kscale * mscale * g * 4 >= 2**62 or mscale * g * g * 2 >= 2**62:
        return _brute_parts(_points_nd(P))
    # a coordinate equal to 1 is never inside [0, a) with a <= 1
    keep = (xs < g) & (ys < g)
    kx, ky = xs[keep], ys[keep]
    ycand = np.append(np.unique(ky), g).astype(np.int64)
    order = np.argsort(kx, kind="stable")
    px = kx[order].astype(np.int64)
    pyidx = np.searchsorted(ycand, ky[order]).astype(np.int64)
    args = (px, pyidx, ycand, np.int64(g), np.int64(kscale), np.int64(mscale))
    bsize = np.int64(max(1, isqrt(len(ycand))))
    up = _sweep(*args, True, bsize)
    down = _sweep(*args, False, bsize)
    return Fraction(int(up), kscale), Fraction(int(down), kscale)


def star_disc_2d(P) -> Fraction:
    """Exact unnormalized star discrepancy of a finite set in [0, 1]^2."""
    up, down = star_disc_2d_parts(P)
    return max(up, down)


def disc_2d_report(P) -> DiscReport:
    up, down = star_disc_2d_parts(P)
    n = len(P) if isinstance(P, PointSet2D) else len(_points_nd(P))
    return DiscReport(n, up, down, max(up, down), None, "oracle")


def _brute_parts(pts: list[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
    """Candidate-grid maximization, O(N^3); reference implementation."""
    if not pts:
        raise ValueError("empty point set")
    n = len(pts)
    one = Fraction(1)
    xs = sorted({x for x, _ in pts if x < 1})
    ys = sorted({y for _, y in pts if y < 1})
    up = Fraction(0)
    down = Fraction(0)
    # closed counts at coordinates, plus the open count at 1
    for a in xs + [one]:
        for c in ys + [one]:
            cnt = sum((x <= a if a < 1 else x < 1) and (y <= c if c < 1 else y < 1) for x, y in pts)
            up = max(up, cnt - n * a * c)
    for a in xs + [one]:
        for c in ys + [one]:
            cnt = sum(x < a and y < c for x, y in pts)
            down = max(down, n * a * c - cnt)
    return up, down


def star_disc_2d_bruteforce(P) -> Fraction:
    up, down = _brute_parts(_points_nd(P))
    return max(up, down)


# --------------------------------------------------------------------------
# sequence versus net


@dataclass(frozen=True)
class SandwichResult:
    max_prefix: Fraction
    net_dstar: Fraction
    ok: bool


def sequence_net_sandwich(S: DigitSequence | Sequence, N: int) -> SandwichResult:
    """max_{M<=N} D*(M, S) <= D*(P) <= max_{M<=N} D*(M, S) + 1 for P = {(x_n, n/N)}."""
    if N < 1:
        raise ValueError("N must be >= 1")
    xs = S.exact_prefix(N) if isinstance(S, DigitSequence) else [as_fraction(x) for x in list(S)[:N]]
    if len(xs) < N:
        raise ValueError("sequence shorter than N")
    max_prefix = max(r.dstar for r in prefix_reports(xs))
    pts = [(x, Fraction(n, N)) for n, x in enumerate(xs)]
    net = star_disc_2d(pts)
    return SandwichResult(max_prefix, net, max_prefix <= net <= max_prefix + 1)
