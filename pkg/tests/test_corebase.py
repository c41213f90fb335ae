from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowdisc.corebase import (
    BaseRational,
    Constant,
    DigitOverflowError,
    ExplicitThenTail,
    NotABijectionError,
    Perm,
    SquareBlockSwap,
    SwapSet,
    as_fraction,
    compose,
    digit_count,
    digits,
    in_square_blocks,
    linear,
    parse_permseq,
    radical_inverse,
    swap,
    translate,
    truncate,
)


def perms(b):
    return st.permutations(list(range(b))).map(Perm)


@pytest.mark.parametrize(
    "n, b, length, expected",
    [(6, 2, 4, [0, 1, 1, 0]), (0, 3, 5, [0, 0, 0, 0, 0]), (5, 3, 3, [2, 1, 0])],
)
def test_digits_examples(n, b, length, expected):
    assert digits(n, b, length) == expected


def test_digits_overflow():
    with pytest.raises(DigitOverflowError):
        digits(8, 2, 3)


def test_digit_count():
    assert digit_count(0, 2) == 0
    assert digit_count(8, 2) == 4
    assert digit_count(26, 3) == 3


@pytest.mark.parametrize("n, b, value", [(1, 2, Fraction(1, 2)), (3, 2, Fraction(3, 4)), (4, 3, Fraction(4, 9)), (0, 5, 0)])
def test_radical_inverse(n, b, value):
    assert radical_inverse(n, b).value == value


def test_truncate_examples():
    def ones():
        while True:
            yield 1

    def twos():
        while True:
            yield 2

    assert truncate(ones(), 2, 2).value == Fraction(3, 4)
    assert truncate(iter([1]), 4, 2).value == Fraction(1, 2)
    assert truncate(twos(), 3, 3).value == Fraction(26, 27)


def test_base_rational_equality_ignores_trailing_zeros():
    a = BaseRational(2, (1, 0, 1))
    b = BaseRational(2, (1, 0, 1, 0, 0))
    assert a == b and hash(a) == hash(b)
    assert str(a) == "5/8"
    assert a == Fraction(5, 8)
    with pytest.raises(ValueError):
        BaseRational(2, (2,))


def test_as_fraction_rejects_floats():
    assert as_fraction("3/8") == Fraction(3, 8)
    with pytest.raises(TypeError):
        as_fraction(0.5)


@given(st.integers(2, 12), st.integers(1, 8), st.data())
def test_base_rational_round_trip(b, precision, data):
    num = data.draw(st.integers(0, b**precision - 1))
    x = BaseRational.from_numerator(num, b, precision)
    assert x.numerator == num
    assert BaseRational(b, x.digits).value == Fraction(num, b**precision)


def test_perm_examples():
    assert translate(Perm.identity(4), 0) == Perm.identity(4)
    assert swap(2) == Perm((1, 0))
    assert swap(2) == translate(Perm.identity(2), 1)
    assert swap(3) == Perm((2, 1, 0))
    assert compose(swap(3), swap(3)).is_identity()


def test_linear_requires_unit():
    assert linear(2, 1, 5).table == (1, 3, 0, 2, 4)
    with pytest.raises(NotABijectionError):
        linear(2, 0, 4)
    with pytest.raises(NotABijectionError):
        Perm((0, 0, 1))


@pytest.mark.parametrize("b", range(2, 17))
def test_swap_is_involution(b):
    assert compose(swap(b), swap(b)).is_identity()


@given(st.integers(2, 10).flatmap(lambda b: st.tuples(perms(b), st.integers(0, 30), st.integers(0, 30))))
def test_translate_is_additive(args):
    sigma, t1, t2 = args
    b = sigma.base
    assert translate(sigma, (t1 + t2) % b) == translate(translate(sigma, t1), t2)


@given(st.integers(2, 9).flatmap(perms))
def test_inverse_and_bar(sigma):
    assert compose(sigma, sigma.inverse()).is_identity()
    assert sigma.bar() == compose(swap(sigma.base), sigma)


def test_perm_parse():
    assert Perm.parse("2,0,1") == Perm((2, 0, 1))
    assert Perm.parse("tau", 4) == swap(4)
    with pytest.raises(ValueError):
        Perm.parse("id")
    with pytest.raises(ValueError):
        Perm.parse("1,0", 3)


def test_square_block_rule():
    sigma = Perm((1, 2, 0))
    seq = SquareBlockSwap(sigma)
    assert seq.sigma_at(0) == sigma
    assert seq.sigma_at(1) == sigma.bar()
    pattern = [seq.sigma_at(r) == sigma for r in range(6)]
    assert pattern == [True, False, True, True, False, False]


def test_square_block_membership_by_enumeration():
    for r in range(200):
        direct = any(h * (h - 1) <= r <= h * h - 1 for h in range(1, r + 2))
        assert in_square_blocks(r) == direct


def test_constant_and_explicit():
    ident, tau = Perm.identity(3), swap(3)
    assert all(Constant(tau).sigma_at(r) == tau for r in range(20))
    seq = ExplicitThenTail((tau, ident), tau)
    assert [seq.sigma_at(r) for r in range(4)] == [tau, ident, tau, tau]
    assert seq.tail_start() == 2
    with pytest.raises(ValueError):
        seq.sigma_at(-1)


def test_swapset_horizon():
    s = SwapSet(Perm.identity(2), (True, False), default=False)
    assert [s.sigma_at(r).is_identity() for r in range(4)] == [True, False, False, False]
    assert s.tail_start() == 2


@pytest.mark.parametrize(
    "text",
    ["const:id", "const:2,0,1", "explicit:2,1,0/id;tail=tau", "swapset:id;mask=0110;default=0", "square-blocks:1,0,2"],
)
def test_permseq_text_round_trip(text):
    seq = parse_permseq(text, 3)
    again = parse_permseq(str(seq), 3)
    assert seq.head(30) == again.head(30)


def test_permseq_unknown_rule():
    with pytest.raises(ValueError):
        parse_permseq("bogus:id", 2)
