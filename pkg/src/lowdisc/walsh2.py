"""Local discrepancy of base-2 digital (0,m,2)-nets with C1 = I via Walsh analysis.

The formula expresses A([0,eta) x [0,beta)) - 2^m eta beta, for m-bit eta
and beta, as a sum of m terms ||2^u beta|| times signs determined by
C2 . eta + beta.  It is used here to build an explicit box with large
discrepancy for nets whose second matrix has a nonsingular upper-left block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .discrepancy import local_delta_anchored, star_disc_2d
from .generators import GenMatrix, PointSet2D, digital_net
from .netverify import digital_rank_check, rank_mod_p

LOWER_BOUND_CONSTANT = Fraction(-49, 36)


class InvalidNetError(ValueError):
    pass


def inverse_mod2(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    aug = np.concatenate([np.array(a, dtype=np.int64) % 2, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r, col]), None)
        if pivot is None:
            raise InvalidNetError("matrix is singular over Z_2")
        aug[[col, pivot]] = aug[[pivot, col]]
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] ^= aug[col]
    return aug[:, n:]


def dist_to_int(x: Fraction) -> Fraction:
    """||x||, the distance to the nearest integer."""
    f = x - (x.numerator // x.denominator)
    return min(f, 1 - f)


def bits(value: int | Sequence[int], m: int) -> np.ndarray:
    """m-bit number as its bit vector (x_1, ..., x_m), x_1 most significant.

    An int is read as the numerator over 2^m.
    """
    if isinstance(value, (int, np.integer)):
        if not 0 <= value < 2**m:
            raise ValueError(f"{value} is not an {m}-bit numerator")
        return np.array([(int(value) >> (m - 1 - i)) & 1 for i in range(m)], dtype=np.int64)
    v = np.array(value, dtype=np.int64)
    if v.shape != (m,) or ((v != 0) & (v != 1)).any():
        raise ValueError(f"expected {m} bits")
    return v


def bits_value(v: Sequence[int]) -> Fraction:
    return sum((Fraction(int(x), 2 ** (i + 1)) for i, x in enumerate(v)), Fraction(0))


@dataclass(frozen=True, eq=False)
class Net2Base2:
    """Digital (0,m,2)-net over Z_2 generated by I and C2."""

    C2: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.C2, dtype=np.int64) % 2
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise InvalidNetError("C2 must be square")
        object.__setattr__(self, "C2", c)
        m = c.shape[0]
        if not digital_rank_check([np.eye(m, dtype=np.int64), c], 2, m, 0):
            raise InvalidNetError("(I, C2) does not generate a (0,m,2)-net")

    @property
    def m(self) -> int:
        return self.C2.shape[0]

    @cached_property
    def corner_inverses(self) -> dict[int, np.ndarray]:
        """u -> inverse of the transposed top-right u x u block of C2."""
        m = self.m
        out = {}
        for u in range(1, m + 1):
            corner = self.C2[:u, m - u :]
            out[u] = inverse_mod2(corner.T)
        return out

    def points(self) -> PointSet2D:
        m = self.m
        return digital_net(
            [GenMatrix.identity(2, m), GenMatrix.from_dense(self.C2, 2)], m, label=f"digital-net-base2 m={m}"
        )


def local_delta_walsh(net: Net2Base2, eta: int | Sequence[int], beta: int | Sequence[int]) -> Fraction:
    """A([0,eta) x [0,beta)) - 2^m eta beta from the Walsh-series formula."""
    m = net.m
    e = bits(eta, m)
    bv = bits(beta, m)
    c = net.C2
    gamma = (c @ e + bv) % 2
    beta_val = bits_value(bv)
    e_ext = np.append(e, 0)  # eta_{m+1} = 0
    total = Fraction(0)
    for u in range(m):
        weight = dist_to_int(beta_val * 2**u)
        if weight == 0:
            continue
        s1 = int(c[u] @ e) % 2
        if u == 0:
            s2 = 0
            m_u = 0
        else:
            inv = net.corner_inverses[u]
            g = gamma[:u]
            s2 = int(g @ (inv @ c[u, m - u :] % 2)) % 2
            # inner products of gamma(u) with the columns of the inverse
            prods = (g @ inv) % 2
            if prods[0] == 1:
                m_u = 0
            else:
                m_u = u
                for i in range(u):
                    if prods[i] != 0:
                        m_u = i
                        break
        j_u = u - m_u
        # bits are 1-indexed: eta_{m-u} is e_ext[m-u-1], eta_{m+1-j} is e_ext[m-j]
        diff = (-1) ** int(e_ext[m - u - 1]) - (-1) ** int(e_ext[m - j_u])
        total += weight * (-1) ** (s1 + s2) * Fraction(diff, 2)
    return total


def local_delta_direct(net: Net2Base2, eta: int | Sequence[int], beta: int | Sequence[int]) -> Fraction:
    m = net.m
    return local_delta_anchored(net.points(), [bits_value(bits(eta, m)), bits_value(bits(beta, m))])


def local_delta_table(net: Net2Base2) -> np.ndarray:
    """Direct counts for all m-bit pairs: entry [e, f] is 2^m * Delta(e/2^m, f/2^m) as integer numerators over 2^m."""
    m = net.m
    P = net.points()
    g = 2**m
    cnt = np.zeros((g + 1, g + 1), dtype=np.int64)
    np.add.at(cnt, (P.xnum + 1, P.ynum + 1), 1)
    cnt = cnt.cumsum(0).cumsum(1)[:g, :g]
    e = np.arange(g, dtype=np.int64)
    # Delta * 2^m = count * 2^m - e * f
    return cnt * g - np.outer(e, e)


# --------------------------------------------------------------------------
# block construction and the witness box


@dataclass(frozen=True, eq=False)
class BlockNet:
    """C2 = [[A, B], [C, D]] with A an m0 x m0 block, m0 = floor(m / 2)."""

    m: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self) -> None:
        m0 = self.m // 2
        shapes = {"A": (m0, m0), "B": (m0, self.m - m0), "C": (self.m - m0, m0), "D": (self.m - m0, self.m - m0)}
        for name, shape in shapes.items():
            arr = np.asarray(getattr(self, name), dtype=np.int64).reshape(shape) % 2
            object.__setattr__(self, name, arr)
        if rank_mod_p(self.A, 2) < m0:
            raise InvalidNetError("block A must be nonsingular")

    @property
    def m0(self) -> int:
        return self.m // 2

    @property
    def C2(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]]) if self.m0 else self.D.copy()

    def net(self) -> Net2Base2:
        return Net2Base2(self.C2)

    @classmethod
    def from_matrix(cls, C2: np.ndarray) -> "BlockNet":
        c = np.asarray(C2, dtype=np.int64) % 2
        m = c.shape[0]
        m0 = m // 2
        return cls(m, c[:m0, :m0], c[:m0, m0:], c[m0:, :m0], c[m0:, m0:])

    @classmethod
    def random(cls, m: int, rng: np.random.Generator) -> "BlockNet":
        """Random block matrix giving a (0,m,2)-net with nonsingular A."""
        m0 = m // 2
        while True:
            a = rng.integers(0, 2, (m0, m0))
            if rank_mod_p(a, 2) == m0:
                break
        c2 = rng.integers(0, 2, (m, m)).astype(np.int64)
        c2[:m0, :m0] = a
        return cls.from_matrix(_repair_corners(c2))


def _repair_corners(c2: np.ndarray) -> np.ndarray:
    """Flip anti-diagonal entries so every top-right u x u corner is nonsingular.

    The corner entry's cofactor is the previous corner, so exactly one of its
    two values works.  The anti-diagonal stays clear of the upper-left block.
    """
    m = c2.shape[0]
    for u in range(1, m + 1):
        if rank_mod_p(c2[:u, m - u :], 2) < u:
            c2[u - 1, m - u] ^= 1
    return c2


def random_net_matrix(m: int, rng: np.random.Generator) -> np.ndarray:
    """C2 such that (I, C2) generates a digital (0,m,2)-net over Z_2."""
    return _repair_corners(rng.integers(0, 2, (m, m)).astype(np.int64))


def witness_beta(m: int) -> np.ndarray:
    m0 = m // 2
    beta = np.zeros(m, dtype=np.int64)
    beta[:m0:2] = 1  # 1, 0, 1, 0, ... over the first m0 bits
    return beta


def witness_delta(m: int) -> np.ndarray:
    m0 = m // 2
    beta = witness_beta(m)
    delta = np.zeros(m, dtype=np.int64)
    for u in range(m0):
        delta[u] = beta[u]
        delta[m - 1 - u] = beta[u] ^ 1
    return delta


def witness_box(block: BlockNet) -> tuple[np.ndarray, np.ndarray, Fraction]:
    """(eta, beta, |Delta(eta, beta)|) for the box that forces the lower bound."""
    m, m0 = block.m, block.m0
    beta = witness_beta(m)
    delta = witness_delta(m)
    eta = np.zeros(m, dtype=np.int64)
    eta[m0:] = delta[m0:]
    if m0:
        rhs = (delta[:m0] + block.B @ eta[m0:]) % 2
        eta[:m0] = inverse_mod2(block.A) @ rhs % 2
    value = abs(local_delta_walsh(block.net(), eta, beta))
    return eta, beta, value


def witness_closed_form(m: int) -> Fraction:
    """m0/6 + (4/9)(2^-m0 - 1) for even m0 and m0/6 + (1/9)(2^-m0 - 1) for odd m0, as commonly stated."""
    m0 = m // 2
    c = Fraction(4, 9) if m0 % 2 == 0 else Fraction(1, 9)
    return Fraction(m0, 6) + c * (Fraction(1, 2**m0) - 1)


def witness_closed_form_corrected(m: int) -> Fraction:
    """Exact value of sum_{u odd < m0} ||2^u beta||; differs from the stated form for odd m0."""
    m0 = m // 2
    if m0 % 2 == 0:
        return Fraction(m0, 6) + Fraction(4, 9) * (Fraction(1, 2**m0) - 1)
    return Fraction(m0, 6) - Fraction(5, 18) + Fraction(2, 9) * Fraction(1, 2**m0)


def witness_sum(m: int) -> Fraction:
    """The sum over odd u < m0 of ||2^u beta||, evaluated term by term."""
    beta = bits_value(witness_beta(m))
    return sum((dist_to_int(beta * 2**u) for u in range(1, m // 2, 2)), Fraction(0))


@dataclass(frozen=True)
class WitnessReport:
    m: int
    dstar: Fraction
    witness: Fraction
    bound: Fraction
    ok: bool = field(default=False)


def verify_block_net_bound(block: BlockNet) -> WitnessReport:
    """D*(P) >= |Delta(witness)| >= m/12 - 49/36."""
    net = block.net()
    _, _, value = witness_box(block)
    dstar = star_disc_2d(net.points())
    bound = Fraction(block.m, 12) + LOWER_BOUND_CONSTANT
    return WitnessReport(block.m, dstar, value, bound, dstar >= value >= bound)
