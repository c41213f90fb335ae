"""Exact constructions of the one- and two-dimensional point sets and sequences.

Sequences are indexed objects: ``seq.point(n, precision)`` gives the
``precision``-truncation of the prescribed expansion of the n-th point and
``seq.exact(n)`` gives its exact real value as a Fraction.  The latter sums
the infinite tail of the expansion and so needs the digits to become
constant eventually.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, Mapping, Sequence

import numpy as np

from .corebase import (
    BaseRational,
    Constant,
    Perm,
    PermSeq,
    digit_count,
    digits,
    truncate,
)

GUARD_DIGITS = 8


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"digital constructions need a prime base, got {p}")


def default_precision(n_max: int, b: int, m: int = 0) -> int:
    """Digits kept for sequence points: room for n_max plus guard digits."""
    return max(digit_count(max(n_max, 1), b), m) + GUARD_DIGITS


# --------------------------------------------------------------------------
# generating matrices


@dataclass(frozen=True)
class GenMatrix:
    """Row-finite matrix over Z_b.

    ``kind`` is ``"strict-upper"`` (entries only above the diagonal),
    ``"nut"`` (nonsingular upper triangular; a diagonal entry that is not
    stored defaults to 1) or ``"general"`` (dense ``size`` x ``size``, prime
    base).  ``entries`` maps row r to ``{column k: value}`` with zero values
    dropped.
    """

    base: int
    kind: str = "strict-upper"
    entries: Mapping[int, Mapping[int, int]] = field(default_factory=dict)
    size: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("strict-upper", "nut", "general"):
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        clean: dict[int, dict[int, int]] = {}
        for r, row in self.entries.items():
            kept = {int(k): int(v) % self.base for k, v in row.items() if int(v) % self.base}
            if kept:
                clean[int(r)] = kept
        object.__setattr__(self, "entries", clean)
        if self.kind == "strict-upper":
            for r, row in clean.items():
                if any(k <= r for k in row):
                    raise ValueError("strict upper triangular matrix has an entry on/below the diagonal")
        elif self.kind == "nut":
            for r, row in clean.items():
                if any(k < r for k in row):
                    raise ValueError("NUT matrix has an entry below the diagonal")
                if r in self.entries and r not in row and r in self.entries[r]:
                    raise ValueError("NUT matrix needs a nonzero diagonal")
        else:
            _require_prime(self.base)
            if self.size is None:
                raise ValueError("general matrices need an explicit size")

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, b: int) -> "GenMatrix":
        return cls(b, "strict-upper", {})

    @classmethod
    def from_dense(cls, array, b: int, kind: str = "general") -> "GenMatrix":
        a = np.asarray(array, dtype=np.int64) % b
        rows = {r: {k: int(a[r, k]) for k in range(a.shape[1]) if a[r, k]} for r in range(a.shape[0])}
        size = a.shape[0] if kind == "general" else None
        if kind == "nut":
            for r in range(a.shape[0]):
                if a[r, r] == 0:
                    raise ValueError("NUT matrix needs a nonzero diagonal")
        return cls(b, kind, rows, size)

    @classmethod
    def identity(cls, p: int, m: int) -> "GenMatrix":
        return cls.from_dense(np.eye(m, dtype=np.int64), p)

    @classmethod
    def reversal(cls, p: int, m: int) -> "GenMatrix":
        return cls.from_dense(np.eye(m, dtype=np.int64)[::-1], p)

    @classmethod
    def pascal(cls, p: int, m: int) -> "GenMatrix":
        """Upper triangular binomial matrix, entry (r, k) = C(k, r) mod p."""
        a = np.array([[comb(k, r) % p for k in range(m)] for r in range(m)], dtype=np.int64)
        return cls.from_dense(a, p)

    @classmethod
    def random_strict_upper(cls, b: int, size: int, rng: np.random.Generator) -> "GenMatrix":
        rows = {r: {k: int(rng.integers(0, b)) for k in range(r + 1, size)} for r in range(size)}
        return cls(b, "strict-upper", rows)

    @classmethod
    def random_nut(cls, b: int, size: int, rng: np.random.Generator, unit_diagonal: bool = False) -> "GenMatrix":
        units = [u for u in range(1, b) if np.gcd(u, b) == 1]
        rows = {}
        for r in range(size):
            row = {k: int(rng.integers(0, b)) for k in range(r + 1, size)}
            row[r] = 1 if unit_diagonal else int(rng.choice(units))
            rows[r] = row
        return cls(b, "nut", rows)

    # access ---------------------------------------------------------------

    def entry(self, r: int, k: int) -> int:
        row = self.entries.get(r)
        if row is not None and k in row:
            return row[k]
        if self.kind == "nut" and r == k:
            return 1
        return 0

    def row(self, r: int) -> dict[int, int]:
        row = dict(self.entries.get(r, {}))
        if self.kind == "nut" and r not in row:
            row[r] = 1
        return row

    def max_column(self) -> int:
        """Largest column index carrying a stored entry (-1 if none)."""
        return max((k for row in self.entries.values() for k in row), default=-1)

    def max_row(self) -> int:
        return max(self.entries, default=-1)

    def dense(self, m: int | None = None) -> np.ndarray:
        m = self.size if m is None else m
        if m is None:
            raise ValueError("size required for an infinite matrix")
        a = np.zeros((m, m), dtype=np.int64)
        for r in range(m):
            for k, v in self.row(r).items():
                if k < m:
                    a[r, k] = v
        return a

    def is_strict_upper(self) -> bool:
        return self.kind == "strict-upper"


# --------------------------------------------------------------------------
# one-dimensional sequences


class DigitSequence:
    """A sequence in [0, 1]^dim given by prescribed base-b digit expansions."""

    base: int
    dim: int = 1

    def digit_stream(self, n: int) -> list[tuple[list[int], int | None]]:
        """Per coordinate: (head digits, tail digit repeated forever).

        The tail digit is None when the expansion is not eventually constant;
        the head is then simply a long prefix.
        """
        raise NotImplementedError

    def digit_iter(self, n: int, coord: int = 0) -> Iterator[int]:
        head, tail = self.digit_stream(n)[coord]
        yield from head
        if tail is None:
            r = len(head)
            while True:
                yield self._far_digit(n, coord, r)
                r += 1
        while True:
            yield tail

    def _far_digit(self, n: int, coord: int, r: int) -> int:
        raise NotImplementedError

    def coords(self, n: int, precision: int | None = None) -> tuple[BaseRational, ...]:
        if n < 0:
            raise ValueError("index must be nonnegative")
        m = precision if precision is not None else default_precision(n, self.base)
        return tuple(truncate(self.digit_iter(n, j), m, self.base) for j in range(self.dim))

    def exact_coords(self, n: int) -> tuple[Fraction, ...]:
        b = self.base
        out = []
        for head, tail in self.digit_stream(n):
            if tail is None:
                raise ValueError("expansion is not eventually constant; exact value unavailable")
            v = 0
            for d in head:
                v = v * b + d
            k = len(head)
            out.append(Fraction(v, b**k) + Fraction(tail, (b - 1) * b**k))
        return tuple(out)

    def point(self, n: int, precision: int | None = None) -> BaseRational:
        if self.dim != 1:
            raise TypeError("point() is for one-dimensional sequences; use coords()")
        return self.coords(n, precision)[0]

    def exact(self, n: int) -> Fraction:
        if self.dim != 1:
            raise TypeError("exact() is for one-dimensional sequences; use exact_coords()")
        return self.exact_coords(n)[0]

    def prefix(self, count: int, precision: int | None = None) -> list:
        m = precision if precision is not None else default_precision(count, self.base)
        if self.dim == 1:
            return [self.point(n, m) for n in range(count)]
        return [self.coords(n, m) for n in range(count)]

    def exact_prefix(self, count: int) -> list:
        if self.dim == 1:
            return [self.exact(n) for n in range(count)]
        return [self.exact_coords(n) for n in range(count)]


class NUTSequence(DigitSequence):
    """X_b^{Sigma,C}: output digit r is sigma_r(n_r) + sum_{k>r} c_r^k n_k mod b.

    With C = 0 this is the generalized van der Corput sequence S_b^Sigma.
    """

    def __init__(self, sigmas: PermSeq, matrix: GenMatrix | None = None, horizon: int = 64):
        if matrix is None:
            matrix = GenMatrix.zero(sigmas.base)
        if matrix.base != sigmas.base:
            raise ValueError("matrix and permutations must share a base")
        if not matrix.is_strict_upper():
            raise ValueError("NUT sequences take a strict upper triangular matrix")
        self.base = sigmas.base
        self.sigmas = sigmas
        self.matrix = matrix
        self.horizon = horizon

    def _digit(self, nd: list[int], r: int) -> int:
        d = self.sigmas.sigma_at(r)(nd[r] if r < len(nd) else 0)
        for k, c in self.matrix.entries.get(r, {}).items():
            if k < len(nd):
                d += c * nd[k]
        return d % self.base

    def _far_digit(self, n: int, coord: int, r: int) -> int:
        return self.sigmas.sigma_at(r)(0)

    def digit_stream(self, n):
        b = self.base
        nd = digits(n, b, digit_count(n, b))
        tail_start = self.sigmas.tail_start()
        if tail_start is None:
            settle = max(len(nd), self.horizon)
            return [([self._digit(nd, r) for r in range(settle)], None)]
        settle = max(len(nd), tail_start)
        head = [self._digit(nd, r) for r in range(settle)]
        return [(head, self.sigmas.sigma_at(settle)(0))]


class GeneralizedVdC(NUTSequence):
    """S_b^Sigma(n) = sum_k sigma_k(n_k) b^-(k+1)."""

    def __init__(self, sigmas: PermSeq, horizon: int = 64):
        super().__init__(sigmas, None, horizon)


def van_der_corput(b: int) -> GeneralizedVdC:
    return GeneralizedVdC(Constant(Perm.identity(b)))


class FirstColumnSequence(DigitSequence):
    """Digital sequence whose matrix is 1 on the diagonal and in the first column.

    Output digits: y_0 = n_0 and y_r = n_r + n_0 mod b for r >= 1.
    """

    def __init__(self, b: int = 2):
        self.base = b

    def digit_stream(self, n):
        b = self.base
        nd = digits(n, b, max(digit_count(n, b), 1))
        head = [nd[0]] + [(nd[r] + nd[0]) % b for r in range(1, len(nd))]
        return [(head, nd[0])]


class IdTauInterleave(DigitSequence):
    """Blocks of b points: S^id(bk), S^tau(bk), S^id(bk+1), ..., S^id(bk+b-2)."""

    def __init__(self, b: int):
        if b < 3:
            raise ValueError("the interleaved construction needs b >= 3")
        self.base = b
        self._id = GeneralizedVdC(Constant(Perm.identity(b)))
        self._tau = GeneralizedVdC(Constant(Perm.swap(b)))

    def _source(self, n: int) -> tuple[DigitSequence, int]:
        k, l = divmod(n, self.base)
        if l == 0:
            return self._id, self.base * k
        if l == 1:
            return self._tau, self.base * k
        return self._id, self.base * k + l - 1

    def digit_stream(self, n):
        seq, idx = self._source(n)
        return seq.digit_stream(idx)


class AllOnesNUT(DigitSequence):
    """Digital NUT sequence with every entry on and above the diagonal equal to 1."""

    def __init__(self, b: int = 2):
        self.base = b

    def digit_stream(self, n):
        b = self.base
        nd = digits(n, b, digit_count(n, b))
        head = [sum(nd[r:]) % b for r in range(len(nd))]
        return [(head, 0)]


class ScrambledNUT(DigitSequence):
    """Z_b^{Pi,C}: digit r is pi_r(sum_{k>=r} c_r^k n_k mod b), C a NUT matrix."""

    def __init__(self, pis: PermSeq, matrix: GenMatrix, strict: bool = True, horizon: int = 64):
        if matrix.kind != "nut":
            raise ValueError("scrambled NUT sequences take a NUT matrix")
        if matrix.base != pis.base:
            raise ValueError("matrix and scramblings must share a base")
        if strict:
            bound = pis.tail_start()
            upto = (bound if bound is not None else horizon) + 1
            for r in range(upto):
                if not pis.sigma_at(r).is_linear():
                    raise ValueError(f"scrambling at index {r} is not linear")
        self.base = pis.base
        self.pis = pis
        self.matrix = matrix
        self.horizon = horizon

    def _digit(self, nd: list[int], r: int) -> int:
        s = 0
        for k, c in self.matrix.row(r).items():
            if k < len(nd):
                s += c * nd[k]
        return self.pis.sigma_at(r)(s % self.base)

    def _far_digit(self, n, coord, r):
        return self.pis.sigma_at(r)(0)

    def digit_stream(self, n):
        nd = digits(n, self.base, digit_count(n, self.base))
        tail_start = self.pis.tail_start()
        if tail_start is None:
            settle = max(len(nd), self.horizon)
            return [([self._digit(nd, r) for r in range(settle)], None)]
        settle = max(len(nd), tail_start)
        return [([self._digit(nd, r) for r in range(settle)], self.pis.sigma_at(settle)(0))]


class DigitalSequence(DigitSequence):
    """s-dimensional digital sequence from upper triangular matrices over Z_p."""

    def __init__(self, matrices: Sequence[GenMatrix], p: int):
        _require_prime(p)
        self.base = p
        self.matrices = list(matrices)
        self.dim = len(self.matrices)

    def digit_stream(self, n):
        p = self.base
        nd = digits(n, p, digit_count(n, p))
        out = []
        for c in self.matrices:
            dense = c.dense(max(len(nd), 1))
            head = [int(v) for v in (dense @ np.array(nd + [0] * (dense.shape[0] - len(nd)), dtype=np.int64)) % p]
            out.append((head, 0))
        return out


def pascal_sequence(p: int = 2, size: int = 32) -> DigitalSequence:
    """Two-dimensional digital sequence from the identity and the Pascal matrix mod p."""
    return DigitalSequence([_upper(GenMatrix.identity(p, size)), _upper(GenMatrix.pascal(p, size))], p)


def _upper(c: GenMatrix) -> GenMatrix:
    return GenMatrix(c.base, "nut", c.entries)


class RepeatedSequence(DigitSequence):
    """Each point of ``inner`` repeated b^t times in a row."""

    def __init__(self, inner: DigitSequence, t: int):
        if t < 0:
            raise ValueError("t must be nonnegative")
        self.inner = inner
        self.base = inner.base
        self.dim = inner.dim
        self.t = t

    def digit_stream(self, n):
        return self.inner.digit_stream(n // self.base**self.t)

    def _far_digit(self, n, coord, r):
        return self.inner._far_digit(n // self.base**self.t, coord, r)


# --------------------------------------------------------------------------
# point-level operations


def gvdc_point(sigmas: PermSeq, n: int, precision: int | None = None) -> BaseRational:
    return GeneralizedVdC(sigmas).point(n, precision)


def nut_point(sigmas: PermSeq, matrix: GenMatrix, n: int, precision: int | None = None) -> BaseRational:
    return NUTSequence(sigmas, matrix).point(n, precision)


def scrambled_nut(pis: PermSeq, matrix: GenMatrix, n: int, precision: int | None = None, strict: bool = True) -> BaseRational:
    return ScrambledNUT(pis, matrix, strict).point(n, precision)


def _check_matrices(matrices: Sequence[GenMatrix], m: int) -> int:
    if not matrices:
        raise ValueError("at least one generating matrix is required")
    p = matrices[0].base
    _require_prime(p)
    for c in matrices:
        if c.base != p:
            raise ValueError("generating matrices must share a base")
        if c.size is not None and c.size != m:
            raise ValueError(f"expected {m}x{m} generating matrices")
    return p


def digital_point(matrices: Sequence[GenMatrix], n: int, m: int) -> tuple[BaseRational, ...]:
    """Point n of the digital net: coordinate j has digits C_j . (n_0..n_{m-1})."""
    p = _check_matrices(matrices, m)
    nd = np.array(digits(n, p, m), dtype=np.int64)
    return tuple(BaseRational(p, tuple(int(v) for v in (c.dense(m) @ nd) % p)) for c in matrices)


def digital_net_numerators(matrices: Sequence[GenMatrix | np.ndarray], p: int, m: int) -> np.ndarray:
    """Integer array (N, s): coordinate j of point n equals out[n, j] / p^m."""
    _require_prime(p)
    n = p**m
    ns = np.arange(n, dtype=np.int64)
    dig = np.stack([(ns // p**k) % p for k in range(m)], axis=1)
    weights = np.array([p ** (m - 1 - k) for k in range(m)], dtype=np.int64)
    cols = []
    for c in matrices:
        dense = c.dense(m) if isinstance(c, GenMatrix) else np.asarray(c, dtype=np.int64)
        y = (dig @ dense.T) % p
        cols.append(y @ weights)
    return np.stack(cols, axis=1)


# --------------------------------------------------------------------------
# two-dimensional point sets


@dataclass(frozen=True, eq=False)
class PointSet2D:
    """b^m-grid point set: point n is (xnum[n] / b^m, ynum[n] / b^m)."""

    base: int
    m: int
    xnum: np.ndarray
    ynum: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        x = np.asarray(self.xnum, dtype=np.int64)
        y = np.asarray(self.ynum, dtype=np.int64)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("coordinate arrays must be one-dimensional and of equal length")
        g = self.base**self.m
        if len(x) and (x.min() < 0 or x.max() >= g or y.min() < 0 or y.max() >= g):
            raise ValueError("coordinates must lie in [0, 1)")
        object.__setattr__(self, "xnum", x)
        object.__setattr__(self, "ynum", y)

    @property
    def denominator(self) -> int:
        return self.base**self.m

    def __len__(self) -> int:
        return len(self.xnum)

    def point(self, n: int) -> tuple[BaseRational, BaseRational]:
        b, m = self.base, self.m
        return (
            BaseRational.from_numerator(int(self.xnum[n]), b, m),
            BaseRational.from_numerator(int(self.ynum[n]), b, m),
        )

    @property
    def points(self) -> list[tuple[BaseRational, BaseRational]]:
        return [self.point(n) for n in range(len(self))]

    def __iter__(self):
        return (self.point(n) for n in range(len(self)))

    def fractions(self) -> list[tuple[Fraction, Fraction]]:
        g = self.denominator
        return [(Fraction(int(x), g), Fraction(int(y), g)) for x, y in zip(self.xnum, self.ynum)]

    def as_multiset(self) -> list[tuple[int, int]]:
        return sorted(zip(self.xnum.tolist(), self.ynum.tolist()))

    def transposed(self) -> "PointSet2D":
        return PointSet2D(self.base, self.m, self.ynum, self.xnum, self.label + " (transposed)")


def permuted_radical_numerators(b: int, sigmas: Sequence[Perm]) -> np.ndarray:
    """x-numerators of S_b^sigma(n) * b^m for all n < b^m, m = len(sigmas)."""
    m = len(sigmas)
    ns = np.arange(b**m, dtype=np.int64)
    x = np.zeros_like(ns)
    for k, s in enumerate(sigmas):
        if s.base != b:
            raise ValueError("permutation base mismatch")
        table = np.array(s.table, dtype=np.int64)
        x += table[(ns // b**k) % b] * b ** (m - 1 - k)
    return x


def hammersley(b: int, m: int, sigmas: Sequence[Perm] | None = None) -> PointSet2D:
    """{(S_b^sigma(n), n / b^m) : 0 <= n < b^m}; all-identity gives the classical set."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if sigmas is None:
        sigmas = [Perm.identity(b)] * m
    sigmas = list(sigmas)
    if len(sigmas) != m:
        raise ValueError(f"need exactly m = {m} permutations, got {len(sigmas)}")
    x = permuted_radical_numerators(b, sigmas)
    name = "hammersley" if all(s.is_identity() for s in sigmas) else "permuted-hammersley"
    return PointSet2D(b, m, x, np.arange(b**m, dtype=np.int64), f"{name} b={b} m={m}")


def digital_net(matrices: Sequence[GenMatrix], m: int, label: str = "digital-net") -> PointSet2D:
    if len(matrices) != 2:
        raise ValueError("PointSet2D needs exactly two generating matrices")
    p = _check_matrices(matrices, m)
    num = digital_net_numerators(matrices, p, m)
    return PointSet2D(p, m, num[:, 0], num[:, 1], label)


def swap_vector(kind: str, m: int, sigma: Perm) -> list[Perm]:
    """Permutation vectors mixing a permutation with its swapped version.

    ``"id-tau"``: floor(m/2) identities then ceil(m/2) swaps;
    ``"alternating"``: id, tau, id, tau, ... (even m only);
    ``"sigma-bar"``: floor(m/2) copies of sigma then ceil(m/2) of tau o sigma.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    b = sigma.base
    ident, tau = Perm.identity(b), Perm.swap(b)
    first = m // 2
    if kind == "id-tau":
        return [ident] * first + [tau] * (m - first)
    if kind == "alternating":
        if m % 2:
            raise ValueError("the alternating vector is defined for even m only")
        return [ident, tau] * (m // 2)
    if kind == "sigma-bar":
        return [sigma] * first + [sigma.bar()] * (m - first)
    raise ValueError(f"unknown swap-vector kind {kind!r}")


SEQUENCE_KINDS = ("vdc", "gvdc", "nut", "first-column", "id-tau-interleave", "pascal", "all-ones", "repeat", "scrambled-nut")


def special_sequence(kind: str, **params) -> DigitSequence:
    """Factory for the named sequence families."""
    if kind == "vdc":
        return van_der_corput(params.get("b", 2))
    if kind == "gvdc":
        return GeneralizedVdC(params["sigmas"])
    if kind == "nut":
        return NUTSequence(params["sigmas"], params.get("matrix"))
    if kind == "first-column":
        return FirstColumnSequence(params.get("b", 2))
    if kind == "id-tau-interleave":
        return IdTauInterleave(params.get("b", 3))
    if kind == "pascal":
        return pascal_sequence(params.get("p", 2), params.get("size", 32))
    if kind == "all-ones":
        return AllOnesNUT(params.get("b", 2))
    if kind == "repeat":
        return RepeatedSequence(params["inner"], params.get("t", 1))
    if kind == "scrambled-nut":
        return ScrambledNUT(params["pis"], params["matrix"], params.get("strict", True))
    raise ValueError(f"unknown sequence kind {kind!r}")
