"""(t, m, s)-net and (t, s)-sequence verification.

Two independent routes: counting points in every elementary interval, and
the rank condition on the generating matrices of a digital net.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .corebase import BaseRational, as_fraction
from .generators import DigitSequence, GenMatrix, PointSet2D, _require_prime


@dataclass(frozen=True)
class ElementaryInterval:
    """prod_j [a_j b^-d_j, (a_j + 1) b^-d_j)."""

    base: int
    resolutions: tuple[int, ...]
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.resolutions) != len(self.indices):
            raise ValueError("one index per axis")
        for d, a in zip(self.resolutions, self.indices):
            if d < 0 or not 0 <= a < self.base**d:
                raise ValueError(f"index {a} out of range at resolution {d}")

    @property
    def volume(self) -> Fraction:
        return Fraction(1, self.base ** sum(self.resolutions))

    def contains(self, point: Sequence) -> bool:
        for x, d, a in zip(point, self.resolutions, self.indices):
            v = as_fraction(x) * self.base**d
            if not a <= v < a + 1:
                return False
        return True

    def __str__(self) -> str:
        sides = [f"[{a}/{self.base}^{d}, {a + 1}/{self.base}^{d})" for d, a in zip(self.resolutions, self.indices)]
        return " x ".join(sides)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All (d_1, ..., d_parts) of nonnegative integers summing to total, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _coordinate_index(x, b: int, m: int) -> int:
    if isinstance(x, BaseRational) and x.base == b:
        d = x.padded(max(m, x.precision)).digits[:m]
        v = 0
        for digit in d:
            v = v * b + digit
        return v
    f = as_fraction(x)
    if not 0 <= f < 1:
        raise ValueError(f"coordinate {f} outside [0, 1)")
    return (f.numerator * b**m) // f.denominator


def grid_indices(P, b: int, m: int, s: int | None = None) -> np.ndarray:
    """(N, s) array of floor(x_j * b^m): the resolution-m cell of every point."""
    if isinstance(P, PointSet2D):
        if P.base != b or P.m < m:
            pts = P.fractions()
        else:
            shift = b ** (P.m - m)
            return np.stack([P.xnum // shift, P.ynum // shift], axis=1)
    elif isinstance(P, np.ndarray):
        return P.astype(np.int64)
    else:
        pts = list(P)
    rows = []
    for p in pts:
        coords = p if isinstance(p, tuple) else (p,)
        rows.append([_coordinate_index(c, b, m) for c in coords])
    arr = np.array(rows, dtype=object if b**m >= 2**62 else np.int64)
    if s is not None and arr.size and arr.shape[1] != s:
        raise ValueError(f"expected {s}-dimensional points, got {arr.shape[1]}")
    return arr


def net_violation(P, b: int, m: int, s: int, t: int) -> ElementaryInterval | None:
    """First elementary interval of volume b^(t-m) not holding exactly b^t points."""
    if not 0 <= t <= m:
        raise ValueError("need 0 <= t <= m")
    g = grid_indices(P, b, m, s)
    n = len(g)
    if n != b**m:
        raise ValueError(f"a net in base {b} with m={m} has {b**m} points, got {n}")
    for dvec in compositions(m - t, s):
        cell = np.zeros(n, dtype=g.dtype)
        for j, d in enumerate(dvec):
            cell = cell * b**d + g[:, j] // b ** (m - d)
        counts = np.bincount(cell.astype(np.int64), minlength=b ** (m - t))
        bad = np.flatnonzero(counts != b**t)
        if bad.size:
            flat = int(bad[0])
            idx = []
            for d in reversed(dvec):
                flat, a = divmod(flat, b**d)
                idx.append(a)
            return ElementaryInterval(b, tuple(dvec), tuple(reversed(idx)))
    return None


def is_net(P, b: int, m: int, s: int, t: int) -> bool:
    return net_violation(P, b, m, s, t) is None


def minimal_t(P, b: int, m: int, s: int) -> int:
    for t in range(m + 1):
        if is_net(P, b, m, s, t):
            return t
    raise AssertionError("t = m always holds for b^m points")


# --------------------------------------------------------------------------
# rank condition


def rank_mod_p(rows: np.ndarray, p: int) -> int:
    a = np.array(rows, dtype=np.int64) % p
    if a.size == 0:
        return 0
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r, col]), None)
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        a[rank] = (a[rank] * pow(int(a[rank, col]), -1, p)) % p
        others = np.flatnonzero(a[:, col])
        for r in others:
            if r != rank:
                a[r] = (a[r] - a[r, col] * a[rank]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def digital_rank_check(matrices: Sequence[GenMatrix | np.ndarray], p: int, m: int, t: int) -> bool:
    """For every (d_j) summing to m - t, the first d_j rows of each C_j are independent over Z_p."""
    _require_prime(p)
    if not 0 <= t <= m:
        raise ValueError("need 0 <= t <= m")
    dense = [c.dense(m) if isinstance(c, GenMatrix) else np.asarray(c, dtype=np.int64) % p for c in matrices]
    for c in dense:
        if c.shape != (m, m):
            raise ValueError(f"expected {m}x{m} matrices")
    k = m - t
    if k == 0:
        return True
    for dvec in compositions(k, len(dense)):
        stacked = np.concatenate([c[:d] for c, d in zip(dense, dvec)], axis=0)
        if rank_mod_p(stacked, p) < k:
            return False
    return True


def digital_t(matrices: Sequence[GenMatrix | np.ndarray], p: int, m: int) -> int:
    for t in range(m + 1):
        if digital_rank_check(matrices, p, m, t):
            return t
    raise AssertionError("t = m always holds")


# --------------------------------------------------------------------------
# sequences


def check_sequence_prefix(S: DigitSequence, b: int, s: int, t: int, m_max: int, l_max: int) -> bool:
    """Every aligned, m-truncated block of b^m points is a (t, m, s)-net, t < m <= m_max, l <= l_max."""
    if m_max <= t:
        raise ValueError("m_max must exceed t")
    if S.base != b or S.dim != s:
        raise ValueError("sequence base or dimension mismatch")
    for m in range(t + 1, m_max + 1):
        size = b**m
        for l in range(l_max + 1):
            block = [S.coords(n, m) for n in range(l * size, (l + 1) * size)]
            if not is_net(block, b, m, s, t):
                return False
    return True
