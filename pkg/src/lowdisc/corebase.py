"""Exact base-b digit arithmetic, digit permutations and permutation sequences.

Everything here is an immutable value.  Point coordinates are held either as
:class:`BaseRational` (a finite digit vector) or as :class:`fractions.Fraction`
when an infinite, eventually constant expansion has to be summed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence


class DigitOverflowError(ValueError):
    """Raised when an integer does not fit in the requested number of digits."""


class NotABijectionError(ValueError):
    """Raised when a digit map is not a permutation of Z_b."""


def _check_base(b: int) -> None:
    if not isinstance(b, int) or b < 2:
        raise ValueError(f"base must be an integer >= 2, got {b!r}")


def digits(n: int, b: int, length: int) -> list[int]:
    """Little-endian base-``b`` digits of ``n`` padded to ``length``.

    >>> digits(6, 2, 4)
    [0, 1, 1, 0]
    """
    _check_base(b)
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    for _ in range(length):
        n, d = divmod(n, b)
        out.append(d)
    if n:
        raise DigitOverflowError(f"integer does not fit in {length} base-{b} digits")
    return out


def digit_count(n: int, b: int) -> int:
    """Number of base-``b`` digits of ``n`` (0 for n == 0)."""
    k = 0
    while n:
        n //= b
        k += 1
    return k


@dataclass(frozen=True)
class BaseRational:
    """The value ``sum(digits[i] * base**-(i+1))`` kept as its digit vector."""

    base: int
    digits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        _check_base(self.base)
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")

    @classmethod
    def from_numerator(cls, num: int, b: int, precision: int) -> "BaseRational":
        """Build ``num / b**precision`` (``0 <= num < b**precision``)."""
        return cls(b, tuple(reversed(digits(num, b, precision))))

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def numerator(self) -> int:
        """Integer ``v`` with value ``v / base**precision``."""
        v = 0
        for d in self.digits:
            v = v * self.base + d
        return v

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.base ** self.precision)

    def stripped(self) -> tuple[int, ...]:
        ds = list(self.digits)
        while ds and ds[-1] == 0:
            ds.pop()
        return tuple(ds)

    def padded(self, precision: int) -> "BaseRational":
        if precision < self.precision:
            return BaseRational(self.base, self.digits[:precision])
        return BaseRational(self.base, self.digits + (0,) * (precision - self.precision))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BaseRational):
            return self.base == other.base and self.stripped() == other.stripped()
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.base, self.stripped()))

    def __lt__(self, other: "BaseRational | Fraction | int") -> bool:
        return self.value < as_fraction(other)

    def __le__(self, other: "BaseRational | Fraction | int") -> bool:
        return self.value <= as_fraction(other)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.base ** self.precision}"

    def __repr__(self) -> str:
        return f"BaseRational({self.base}, {self.digits})"


def as_fraction(x: object) -> Fraction:
    """Exact rational value of a coordinate (BaseRational, Fraction, int or 'p/q')."""
    if isinstance(x, BaseRational):
        return x.value
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point coordinates are not accepted; pass exact rationals")
    return Fraction(x)  # numbers.Rational


def radical_inverse(n: int, b: int) -> BaseRational:
    """phi_b(n): reverse the base-b digits of ``n`` behind the radix point."""
    _check_base(b)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return BaseRational(b, tuple(digits(n, b, digit_count(n, b))))


def truncate(stream: Iterable[int], m: int, b: int) -> BaseRational:
    """m-truncation of a prescribed expansion: keep its first ``m`` digits.

    Shorter (finite) expansions are padded with zeros.
    """
    if m < 1:
        raise ValueError("precision m must be >= 1")
    out = []
    for d in stream:
        if len(out) == m:
            break
        out.append(d)
    out.extend([0] * (m - len(out)))
    return BaseRational(b, tuple(out))


# --------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Perm:
    """A bijection of {0, ..., base-1}; ``table[i]`` is the image of ``i``."""

    table: tuple[int, ...]

    def __post_init__(self) -> None:
        t = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", t)
        if len(t) < 2 or sorted(t) != list(range(len(t))):
            raise NotABijectionError(f"{t} is not a permutation of Z_{len(t)}")

    @property
    def base(self) -> int:
        return len(self.table)

    def __call__(self, i: int) -> int:
        return self.table[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.table))

    @classmethod
    def identity(cls, b: int) -> "Perm":
        _check_base(b)
        return cls(tuple(range(b)))

    @classmethod
    def swap(cls, b: int) -> "Perm":
        """tau(i) = b - 1 - i."""
        _check_base(b)
        return cls(tuple(b - 1 - i for i in range(b)))

    @classmethod
    def linear(cls, f: int, g: int, b: int) -> "Perm":
        """i -> f*i + g mod b; requires gcd(f, b) == 1."""
        _check_base(b)
        if f % b == 0 or gcd(f % b, b) != 1:
            raise NotABijectionError(f"i -> {f}i+{g} mod {b} is not a bijection")
        return cls(tuple((f * i + g) % b for i in range(b)))

    @classmethod
    def parse(cls, text: str, b: int | None = None) -> "Perm":
        """Parse ``"2,0,1"``, ``"id"`` or ``"tau"`` (the keywords need ``b``)."""
        s = text.strip()
        if s in ("id", "tau"):
            if b is None:
                raise ValueError(f"base required to parse {s!r}")
            return cls.identity(b) if s == "id" else cls.swap(b)
        p = cls(tuple(int(v) for v in s.split(",")))
        if b is not None and p.base != b:
            raise ValueError(f"permutation {s!r} has base {p.base}, expected {b}")
        return p

    def translate(self, t: int) -> "Perm":
        """(sigma (+) t)(i) = sigma(i) + t mod b."""
        b = self.base
        return Perm(tuple((v + t) % b for v in self.table))

    def compose(self, other: "Perm") -> "Perm":
        """self o other, i.e. i -> self(other(i))."""
        if other.base != self.base:
            raise ValueError("cannot compose permutations of different bases")
        return Perm(tuple(self.table[v] for v in other.table))

    def inverse(self) -> "Perm":
        inv = [0] * self.base
        for i, v in enumerate(self.table):
            inv[v] = i
        return Perm(tuple(inv))

    def bar(self) -> "Perm":
        """tau o sigma."""
        return Perm.swap(self.base).compose(self)

    def is_identity(self) -> bool:
        return self.table == tuple(range(self.base))

    def is_linear(self) -> bool:
        b = self.base
        g = self.table[0]
        f = (self.table[1] - g) % b
        return gcd(f, b) == 1 and all((f * i + g) % b == v for i, v in enumerate(self.table))


def translate(sigma: Perm, t: int) -> Perm:
    return sigma.translate(t)


def swap(b: int) -> Perm:
    return Perm.swap(b)


def linear(f: int, g: int, b: int) -> Perm:
    return Perm.linear(f, g, b)


def compose(sigma: Perm, pi: Perm) -> Perm:
    return sigma.compose(pi)


# --------------------------------------------------------------------------
# permutation sequences


def in_square_blocks(r: int) -> bool:
    """Membership of r in the union of blocks {H(H-1), ..., H^2 - 1}, H >= 1."""
    h = isqrt(r) + 1
    return h * (h - 1) <= r


class PermSeq:
    """Rule-based infinite sequence (sigma_0, sigma_1, ...) of permutations."""

    base: int

    def sigma_at(self, r: int) -> Perm:
        raise NotImplementedError

    def tail_start(self) -> int | None:
        """Index from which the sequence is constant, or None if it never is."""
        return None

    def head(self, n: int) -> list[Perm]:
        return [self.sigma_at(r) for r in range(n)]

    def __iter__(self):
        r = 0
        while True:
            yield self.sigma_at(r)
            r += 1

    @staticmethod
    def parse(text: str, b: int) -> "PermSeq":
        return parse_permseq(text, b)


@dataclass(frozen=True)
class Constant(PermSeq):
    sigma: Perm

    @property
    def base(self) -> int:  # type: ignore[override]
        return self.sigma.base

    def sigma_at(self, r: int) -> Perm:
        if r < 0:
            raise ValueError("index must be nonnegative")
        return self.sigma

    def tail_start(self) -> int:
        return 0

    def __str__(self) -> str:
        return f"const:{self.sigma}"


@dataclass(frozen=True)
class ExplicitThenTail(PermSeq):
    explicit: tuple[Perm, ...]
    tail: Perm

    def __post_init__(self) -> None:
        object.__setattr__(self, "explicit", tuple(self.explicit))
        if any(p.base != self.tail.base for p in self.explicit):
            raise ValueError("all permutations must share one base")

    @property
    def base(self) -> int:  # type: ignore[override]
        return self.tail.base

    def sigma_at(self, r: int) -> Perm:
        if r < 0:
            raise ValueError("index must be nonnegative")
        return self.explicit[r] if r < len(self.explicit) else self.tail

    def tail_start(self) -> int:
        return len(self.explicit)

    def __str__(self) -> str:
        head = "/".join(str(p) for p in self.explicit)
        return f"explicit:{head};tail={self.tail}"


@dataclass(frozen=True)
class SwapSet(PermSeq):
    """sigma at indices in the set S, tau o sigma elsewhere.

    Membership is stored as a finite bitmask; indices past the mask use
    ``default``.
    """

    sigma: Perm
    mask: tuple[bool, ...]
    default: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "mask", tuple(bool(v) for v in self.mask))

    @classmethod
    def from_predicate(cls, sigma: Perm, member, horizon: int = 64, default: bool = True) -> "SwapSet":
        return cls(sigma, tuple(member(r) for r in range(horizon)), default)

    @property
    def base(self) -> int:  # type: ignore[override]
        return self.sigma.base

    def member(self, r: int) -> bool:
        return self.mask[r] if r < len(self.mask) else self.default

    def sigma_at(self, r: int) -> Perm:
        if r < 0:
            raise ValueError("index must be nonnegative")
        return self.sigma if self.member(r) else self.sigma.bar()

    def tail_start(self) -> int:
        return len(self.mask)

    def __str__(self) -> str:
        bits = "".join("1" if v else "0" for v in self.mask)
        return f"swapset:{self.sigma};mask={bits};default={int(self.default)}"


@dataclass(frozen=True)
class SquareBlockSwap(PermSeq):
    """sigma on the blocks {H(H-1), ..., H^2-1}, tau o sigma between them."""

    sigma: Perm

    @property
    def base(self) -> int:  # type: ignore[override]
        return self.sigma.base

    def sigma_at(self, r: int) -> Perm:
        if r < 0:
            raise ValueError("index must be nonnegative")
        return self.sigma if in_square_blocks(r) else self.sigma.bar()

    def as_swapset(self, horizon: int = 64) -> SwapSet:
        """Finite-horizon stand-in; agrees with this rule below ``horizon``."""
        return SwapSet.from_predicate(self.sigma, in_square_blocks, horizon, default=True)

    def __str__(self) -> str:
        return f"square-blocks:{self.sigma}"


def parse_permseq(text: str, b: int) -> PermSeq:
    """Parse the textual permutation-sequence format.

    ``const:<perm>``, ``explicit:<p>/<p>/...;tail=<perm>``,
    ``swapset:<perm>;mask=0110...;default=1``, ``square-blocks:<perm>``.
    """
    rule, _, rest = text.strip().partition(":")
    parts = [p.strip() for p in rest.split(";")]
    if rule == "const":
        return Constant(Perm.parse(parts[0], b))
    if rule == "explicit":
        head = tuple(Perm.parse(p, b) for p in parts[0].split("/") if p)
        opts = dict(p.split("=", 1) for p in parts[1:])
        return ExplicitThenTail(head, Perm.parse(opts.get("tail", "id"), b))
    if rule == "swapset":
        opts = dict(p.split("=", 1) for p in parts[1:])
        mask = tuple(c == "1" for c in opts.get("mask", ""))
        return SwapSet(Perm.parse(parts[0], b), mask, opts.get("default", "1") == "1")
    if rule == "square-blocks":
        return SquareBlockSwap(Perm.parse(parts[0], b))
    raise ValueError(f"unknown permutation-sequence rule {rule!r}")


def sigma_at(seq: PermSeq, r: int) -> Perm:
    return seq.sigma_at(r)


def perms_from(seq: Sequence[Perm] | PermSeq, count: int) -> list[Perm]:
    if isinstance(seq, PermSeq):
        return seq.head(count)
    return list(seq)[:count]


__all__ = [
    "BaseRational",
    "Constant",
    "DigitOverflowError",
    "ExplicitThenTail",
    "NotABijectionError",
    "Perm",
    "PermSeq",
    "SquareBlockSwap",
    "SwapSet",
    "as_fraction",
    "compose",
    "digit_count",
    "digits",
    "in_square_blocks",
    "linear",
    "parse_permseq",
    "radical_inverse",
    "sigma_at",
    "swap",
    "translate",
    "truncate",
]
