"""Digit-level discrepancy functions and exact discrepancy of NUT (0,1)-sequences.

For a permutation sigma of Z_b, phi_{b,h}^sigma measures how the first k of
the points sigma(0)/b, ..., sigma(b-1)/b fill [0, h/b) against the linear
expectation.  psi^+ and psi^- are the upper envelopes of phi and -phi over
h; summing them along the b-adic scales of N gives D+, D- and D exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, lcm
from typing import Sequence

import numpy as np

from .corebase import Perm, PermSeq, as_fraction, digit_count, digits
from .discrepancy import DiscReport
from .generators import GenMatrix

ONE = Fraction(1)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Periodic function, period 1, linear on each [breakpoints[i], breakpoints[i+1]).

    ``slopes[i]`` and ``intercepts[i]`` describe the piece on segment i, in
    terms of the reduced argument x - floor(x).
    """

    breakpoints: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]
    intercepts: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        bp = tuple(Fraction(x) for x in self.breakpoints)
        if len(bp) < 2 or bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must increase strictly")
        if len(self.slopes) != len(bp) - 1 or len(self.intercepts) != len(bp) - 1:
            raise ValueError("one slope and intercept per segment")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "slopes", tuple(Fraction(s) for s in self.slopes))
        object.__setattr__(self, "intercepts", tuple(Fraction(c) for c in self.intercepts))

    @classmethod
    def constant(cls, c=0) -> "PiecewiseLinear":
        return cls((Fraction(0), ONE), (Fraction(0),), (Fraction(c),))

    @property
    def segments(self) -> int:
        return len(self.slopes)

    def segment_of(self, x: Fraction) -> int:
        lo, hi = 0, self.segments - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.breakpoints[mid] <= x:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        y = x - floor(x)
        i = self.segment_of(y)
        return self.slopes[i] * y + self.intercepts[i]

    def left_limit(self, x) -> Fraction:
        """Value approached from the left, so that f.left_limit(1) closes the period."""
        x = as_fraction(x)
        y = x - floor(x)
        if y == 0:
            y = ONE
        i = self.segment_of(y) if y < 1 else self.segments - 1
        if self.breakpoints[i] == y:
            i -= 1
        return self.slopes[i] * y + self.intercepts[i]

    def is_continuous(self) -> bool:
        for i in range(1, self.segments):
            x = self.breakpoints[i]
            if self.slopes[i - 1] * x + self.intercepts[i - 1] != self.slopes[i] * x + self.intercepts[i]:
                return False
        return self.left_limit(1) == self(0)

    def values_at_breakpoints(self) -> list[Fraction]:
        return [self(x) for x in self.breakpoints[:-1]] + [self.left_limit(1)]

    def simplified(self) -> "PiecewiseLinear":
        bp, sl, ic = [self.breakpoints[0]], [self.slopes[0]], [self.intercepts[0]]
        for i in range(1, self.segments):
            if self.slopes[i] == sl[-1] and self.intercepts[i] == ic[-1]:
                continue
            bp.append(self.breakpoints[i])
            sl.append(self.slopes[i])
            ic.append(self.intercepts[i])
        bp.append(ONE)
        return PiecewiseLinear(tuple(bp), tuple(sl), tuple(ic))

    def _refined(self, points: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
        slopes, intercepts = [], []
        for left in points[:-1]:
            i = self.segment_of(left)
            slopes.append(self.slopes[i])
            intercepts.append(self.intercepts[i])
        return slopes, intercepts

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        pts = sorted(set(self.breakpoints) | set(other.breakpoints))
        s1, c1 = self._refined(pts)
        s2, c2 = other._refined(pts)
        return PiecewiseLinear(
            tuple(pts), tuple(a + b for a, b in zip(s1, s2)), tuple(a + b for a, b in zip(c1, c2))
        ).simplified()

    def __neg__(self) -> "PiecewiseLinear":
        return PiecewiseLinear(self.breakpoints, tuple(-s for s in self.slopes), tuple(-c for c in self.intercepts))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseLinear):
            return NotImplemented
        a, b = self.simplified(), other.simplified()
        return (a.breakpoints, a.slopes, a.intercepts) == (b.breakpoints, b.slopes, b.intercepts)

    def __hash__(self) -> int:
        s = self.simplified()
        return hash((s.breakpoints, s.slopes, s.intercepts))

    def first_piece(self) -> tuple[Fraction, Fraction]:
        """(end of the first segment, slope there); f(x) = slope * x near 0 when f(0) = 0."""
        return self.breakpoints[1], self.slopes[0]

    def table(self, grid: Sequence) -> list[tuple[Fraction, Fraction]]:
        return [(as_fraction(x), self(x)) for x in grid]


def envelope(fns: Sequence[PiecewiseLinear]) -> PiecewiseLinear:
    """Pointwise maximum, with crossing points inserted as breakpoints."""
    if not fns:
        raise ValueError("need at least one function")
    pts = sorted(set().union(*(f.breakpoints for f in fns)))
    pieces = [f._refined(pts) for f in fns]
    bp, sl, ic = [], [], []
    for seg, (left, right) in enumerate(zip(pts, pts[1:])):
        lines = [(p[0][seg], p[1][seg]) for p in pieces]
        cuts = {left, right}
        for i in range(len(lines)):
            for j in range(i + 1, len(lines)):
                (s1, c1), (s2, c2) = lines[i], lines[j]
                if s1 != s2:
                    x = (c2 - c1) / (s1 - s2)
                    if left < x < right:
                        cuts.add(x)
        cuts = sorted(cuts)
        for a, b in zip(cuts, cuts[1:]):
            mid = (a + b) / 2
            # ties at the midpoint are broken by slope so the piece is the true max on (a, b)
            s, c = max(lines, key=lambda L: (L[0] * mid + L[1], L[0]))
            bp.append(a)
            sl.append(s)
            ic.append(c)
    bp.append(ONE)
    return PiecewiseLinear(tuple(bp), tuple(sl), tuple(ic)).simplified()


# --------------------------------------------------------------------------
# phi and psi


def phi(b: int, sigma: Perm, h: int) -> PiecewiseLinear:
    """phi_{b,h}^sigma on [0, 1): on [(k-1)/b, k/b) it compares the first k points of sigma(i)/b with [0, h/b)."""
    if sigma.base != b:
        raise ValueError("permutation base mismatch")
    if not 0 <= h < b:
        raise ValueError(f"h must lie in [0, {b})")
    bp, sl, ic = [], [], []
    for k in range(1, b + 1):
        below = sum(1 for i in range(k) if sigma(i) < h)
        bp.append(Fraction(k - 1, b))
        if h <= sigma(k - 1):
            sl.append(Fraction(-h))
            ic.append(Fraction(below))
        else:
            sl.append(Fraction(b - h))
            ic.append(Fraction(-(k - below)))
    bp.append(ONE)
    return PiecewiseLinear(tuple(bp), tuple(sl), tuple(ic)).simplified()


@lru_cache(maxsize=4096)
def _psi_cached(b: int, table: tuple[int, ...]) -> tuple[PiecewiseLinear, PiecewiseLinear, PiecewiseLinear]:
    sigma = Perm(table)
    phis = [phi(b, sigma, h) for h in range(b)]
    plus = envelope(phis)
    minus = envelope([-f for f in phis])
    return plus, minus, plus + minus


def psi_fns(b: int, sigma: Perm) -> tuple[PiecewiseLinear, PiecewiseLinear, PiecewiseLinear]:
    """(psi^+, psi^-, psi = psi^+ + psi^-) for the permutation sigma."""
    if sigma.base != b:
        raise ValueError("permutation base mismatch")
    return _psi_cached(b, sigma.table)


# --------------------------------------------------------------------------
# exact discrepancy of X_b^{Sigma,C}


def theta(C: GenMatrix, b: int, r: int, N: int) -> int:
    """sum_{k>r} c_r^k a_k mod b, where a_k are the digits of N - 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    a = digits(N - 1, b, digit_count(N - 1, b))
    return sum(c * a[k] for k, c in C.entries.get(r, {}).items() if k > r and k < len(a)) % b


def _series(N: int, b: int, fn_at, tail_start: int) -> Fraction:
    """sum_{j>=1} f_j(N / b^j) where f_j = fn_at(j - 1) and f_j is fixed for j > tail_start.

    Once N / b^j lies in the first linear piece of the fixed function the
    remaining terms form a geometric series.
    """
    J = max(tail_start, 1)
    tail_fn = fn_at(J)
    end, slope = tail_fn.first_piece()
    while Fraction(N, b ** (J + 1)) >= end:
        J += 1
    total = sum((fn_at(j - 1)(Fraction(N, b**j)) for j in range(1, J + 1)), Fraction(0))
    return total + slope * Fraction(N, b**J * (b - 1))


def formula_disc(sigmas: PermSeq, C: GenMatrix | None, b: int, N: int) -> DiscReport:
    """D+, D-, D* and D of the first N points of X_b^{Sigma,C} from the psi-function series."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if C is None:
        C = GenMatrix.zero(b)
    if not C.is_strict_upper():
        raise ValueError("formula_disc needs a strict upper triangular matrix")
    if sigmas.base != b or C.base != b:
        raise ValueError("base mismatch")
    start = sigmas.tail_start()
    if start is None:
        raise ValueError("the permutation sequence must become constant for an exact series")
    # theta_r(N) vanishes once r + 1 reaches the digit count of N - 1
    settle = max(start, digit_count(N - 1, b))

    def shifted(r: int) -> Perm:
        return sigmas.sigma_at(r).translate(theta(C, b, r, N))

    dplus = _series(N, b, lambda r: psi_fns(b, shifted(r))[0], settle)
    dminus = _series(N, b, lambda r: psi_fns(b, shifted(r))[1], settle)
    dext = _series(N, b, lambda r: psi_fns(b, sigmas.sigma_at(r))[2], settle)
    return DiscReport(N, dplus, dminus, max(dplus, dminus), dext, "formula")


# --------------------------------------------------------------------------
# asymptotic constants


@dataclass(frozen=True)
class AlphaEstimate:
    """a_n = max over one period of sum_{j=1}^n f(x / b^j); estimate = min_n a_n / n."""

    b: int
    sigma: Perm
    which: str
    values: tuple[Fraction, ...]

    @property
    def n_max(self) -> int:
        return len(self.values)

    @property
    def ratios(self) -> list[Fraction]:
        return [a / n for n, a in enumerate(self.values, start=1)]

    @property
    def estimate(self) -> Fraction:
        return min(self.ratios)

    @property
    def best_n(self) -> int:
        r = self.ratios
        return r.index(min(r)) + 1

    def to_json(self) -> dict:
        return {
            "b": self.b,
            "sigma": str(self.sigma),
            "which": self.which,
            "n_max": self.n_max,
            "a_n": [f"{a.numerator}/{a.denominator}" for a in self.values],
            "estimate": f"{self.estimate.numerator}/{self.estimate.denominator}",
            "estimate_decimal": round(float(self.estimate), 6),
        }


ALPHA_BUDGET = 20_000_000


def closed_form_alpha(b: int) -> Fraction:
    """Known value of the constant for the identity permutation."""
    return Fraction(b - 1, 4) if b % 2 else Fraction(b * b, 4 * (b + 1))


def scale_sums_max(f: PiecewiseLinear, b: int, n: int, budget: int = ALPHA_BUDGET) -> Fraction:
    """max over x of sum_{j=1}^n f(x / b^j) for a continuous f with period 1.

    The sum has period b^n and is linear between the points where some x / b^j
    hits a breakpoint of f, so the maximum is taken over those points.  Work is
    done in integers: x = u / L with L the common denominator of the breakpoints.
    """
    if not f.is_continuous():
        raise ValueError("scale sums need a continuous periodic function")
    P_frac = f.breakpoints[:-1]
    L = 1
    for p in f.breakpoints:
        L = lcm(L, p.denominator)
    E = 1
    for v in f.slopes + f.intercepts:
        E = lcm(E, v.denominator)
    P = np.array([int(p * L) for p in f.breakpoints], dtype=np.int64)
    A = [int(c * E) for c in f.intercepts]
    B = [int(s * E) for s in f.slopes]
    K = len(P_frac)
    count = sum(K * b ** (n - j) for j in range(1, n + 1))
    if count > budget:
        raise OverflowError(f"breakpoint set of size {count} exceeds the budget {budget}")
    period = L * b**n
    bound = (max(map(abs, A)) * period + max(map(abs, B)) * period) * n
    dtype = np.int64 if bound < 2**62 else object
    us = []
    for j in range(1, n + 1):
        ks = np.arange(b ** (n - j), dtype=np.int64)
        for Pi in P[:-1]:
            us.append((ks * L + int(Pi)) * b**j)
    u = np.concatenate(us).astype(dtype)
    total = np.zeros(len(u), dtype=dtype)
    Aarr = np.array(A, dtype=dtype)
    Barr = np.array(B, dtype=dtype)
    for j in range(1, n + 1):
        scale = L * b**j
        w = u % scale
        seg = np.searchsorted(P * b**j, w, side="right") - 1
        # f(w / scale) * E * L * b^n = A * L * b^n + B * w * b^(n-j)
        total = total + Aarr[seg] * period + Barr[seg] * w * b ** (n - j)
    return Fraction(int(total.max()), E * period)


def alpha(b: int, sigma: Perm, n_max: int, which: str = "psi", budget: int = ALPHA_BUDGET) -> AlphaEstimate:
    """Upper estimate of the constant alpha_b^sigma (``which`` = psi, plus or minus)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    plus, minus, both = psi_fns(b, sigma)
    f = {"psi": both, "plus": plus, "minus": minus}[which]
    vals = tuple(scale_sums_max(f, b, n, budget) for n in range(1, n_max + 1))
    return AlphaEstimate(b, sigma, which, vals)


def alpha_pm(b: int, sigma: Perm, n_max: int, budget: int = ALPHA_BUDGET) -> tuple[AlphaEstimate, AlphaEstimate]:
    return alpha(b, sigma, n_max, "plus", budget), alpha(b, sigma, n_max, "minus", budget)


def _eval_numerators(f: PiecewiseLinear, num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    """f(num / den) for an integer array num, as (numerators, common denominator)."""
    L = 1
    for p in f.breakpoints:
        L = lcm(L, p.denominator)
    E = 1
    for v in f.slopes + f.intercepts:
        E = lcm(E, v.denominator)
    P = np.array([int(p * L) for p in f.breakpoints[:-1]], dtype=np.int64)
    A = np.array([int(c * E) for c in f.intercepts], dtype=np.int64)
    B = np.array([int(s * E) for s in f.slopes], dtype=np.int64)
    w = num % den
    seg = np.searchsorted(P * den, w * L, side="right") - 1
    return A[seg] * den + B[seg] * w, E * den


def hammersley_psi_maxima(b: int, sigmas: Sequence[Perm]) -> tuple[Fraction, Fraction]:
    """max over 1 <= n <= b^m of sum_{j=1}^m psi^{sigma_{j-1},+/-}(n / b^j), m = len(sigmas)."""
    m = len(sigmas)
    n = np.arange(1, b**m + 1, dtype=np.int64)
    out = []
    for side in (0, 1):
        parts = [_eval_numerators(psi_fns(b, s)[side], n, b**j) for j, s in enumerate(sigmas, start=1)]
        den = 1
        for _, d in parts:
            den = lcm(den, d)
        total = np.zeros(len(n), dtype=np.int64)
        for vals, d in parts:
            total += vals * (den // d)
        out.append(Fraction(int(total.max()), den))
    return out[0], out[1]
