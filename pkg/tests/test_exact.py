import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from exact import (
    DomainError,
    FieldOp,
    Ordering,
    QuadraticIrrational as QI,
    nearest_distance,
    qi_compare,
    qi_field,
    qi_floor,
    qi_frac,
    qi_make,
    qi_sqrt,
    split_square,
    to_decimal,
)
from tests.strategies import rationals, same_field_pairs, surds

SQRT2 = qi_sqrt(2)
SQRT5 = qi_sqrt(5)


def approx_float(x: QI) -> float:
    return (x.a + x.b * math.sqrt(x.d)) / x.c


def test_canonical_form():
    x = qi_make(2, 2, 4, 8)
    assert (x.a, x.b, x.c, x.d) == (1, 2, 2, 2)
    y = QI(1, 1, -2, 5)
    assert (y.a, y.b, y.c, y.d) == (-1, -1, 2, 5)
    # sqrt(4) collapses into the rational part
    assert QI(1, 1, 1, 4) == 3
    assert QI(1, 1, 1, 4).is_rational


def test_rejects_invalid_parts():
    with pytest.raises(DomainError):
        QI(1, 1, 0, 2)
    with pytest.raises(DomainError):
        QI(1, 1, 1, -3)
    with pytest.raises(DomainError):
        QI(1, 1, 1, 0)


def test_split_square():
    assert split_square(8) == (2, 2)
    assert split_square(221) == (1, 221)
    assert split_square(72) == (6, 2)
    assert split_square(9 * 13 * 13 - 4) == (1, 1517)
    assert split_square(1) == (1, 1)


def test_str_rendering():
    assert str(QI(-11, 1, 10, 221)) == "(-11+1*sqrt(221))/10"
    assert str(QI(3, -1, 2, 5)) == "(3-1*sqrt(5))/2"
    assert str(SQRT2) == "(0+1*sqrt(2))/1"
    assert str(QI.from_rational(Fraction(7, 3))) == "7/3"
    assert str(QI.from_rational(-4)) == "-4"


def test_field_operations():
    one_plus = 1 + SQRT2
    assert 1 / one_plus == SQRT2 - 1
    assert qi_field(one_plus, SQRT2, FieldOp.SUB) == 1
    assert qi_field(SQRT2, SQRT2, "mul") == 2
    assert qi_field(one_plus, one_plus, FieldOp.DIV) == 1
    with pytest.raises(DomainError):
        SQRT2 + SQRT5
    with pytest.raises(DomainError):
        (SQRT2 - SQRT2).reciprocal()


def test_sqrt_of_rationals():
    assert qi_sqrt(Fraction(1, 4)) == Fraction(1, 2)
    assert qi_sqrt(0) == 0
    assert qi_sqrt(Fraction(2, 9)) * 3 == SQRT2
    with pytest.raises(DomainError):
        qi_sqrt(-1)


def test_compare_across_fields():
    assert qi_compare(1 + SQRT2, SQRT5) is Ordering.GT
    assert qi_compare(SQRT5, 1 + SQRT2) is Ordering.LT
    assert qi_compare((3 - SQRT5) / 2, Fraction(1, 3)) is Ordering.GT
    assert qi_compare(1 + SQRT2, Fraction(12, 5)) is Ordering.GT
    assert qi_compare(qi_sqrt(8), 2 * SQRT2) is Ordering.EQ
    # sqrt(3) + sqrt(2) lies in no single quadratic field
    with pytest.raises(DomainError):
        qi_sqrt(3) + SQRT2


def test_floor_and_frac():
    assert qi_floor(-(1 + SQRT5) / 2) == -2
    assert qi_floor((3 + SQRT5) / 2) == 2
    assert qi_floor(Fraction(-7, 2)) == -4
    assert qi_frac(7 + SQRT2) == SQRT2 - 1


def test_nearest_distance():
    assert nearest_distance((SQRT5 - 1) / 2) == (3 - SQRT5) / 2
    assert nearest_distance(Fraction(7, 3)) == Fraction(1, 3)
    assert nearest_distance(5) == 0


def test_to_decimal():
    assert to_decimal(SQRT2, 5) == "1.41421"
    assert to_decimal(-SQRT2, 3) == "-1.414"
    assert to_decimal(Fraction(1, 3), 4) == "0.3333"
    with pytest.raises(DomainError):
        to_decimal(SQRT2, -1)


@given(surds(), st.integers(min_value=1, max_value=12))
def test_scaling_does_not_change_the_value(x, k):
    assert qi_make(k * x.a, k * x.b, k * x.c, x.d) == x
    assert hash(qi_make(k * x.a, k * x.b, k * x.c, x.d)) == hash(x)


@given(same_field_pairs())
def test_field_laws(pair):
    x, y = pair
    assert (x + y) - y == x
    assert x * y == y * x
    assert (x * y) / y == x
    assert x - x == 0


@settings(max_examples=200)
@given(same_field_pairs())
def test_compare_matches_sign_of_difference(pair):
    x, y = pair
    assert qi_compare(x, y) == Ordering((x - y).sign())
    assert (x < y) == (qi_compare(x, y) is Ordering.LT)


@given(surds(), surds())
def test_compare_is_antisymmetric(x, y):
    assert qi_compare(x, y) == Ordering(-qi_compare(y, x))


@given(surds(), rationals)
def test_compare_against_rationals_agrees_with_floats(x, r):
    gap = approx_float(x) - float(r)
    if abs(gap) > 1e-9:
        assert qi_compare(x, r) is (Ordering.GT if gap > 0 else Ordering.LT)


@given(surds())
def test_floor_brackets_the_value(x):
    n = qi_floor(x)
    assert qi_compare(n, x) is Ordering.LT
    assert qi_compare(x, n + 1) is Ordering.LT
    f = qi_frac(x)
    assert 0 < f < 1


@given(surds())
def test_nearest_distance_is_at_most_half(x):
    d = nearest_distance(x)
    assert 0 < d < Fraction(1, 2)
    xf = approx_float(x)
    assert abs(approx_float(d) - abs(xf - round(xf))) < 1e-9


def check_distance_is_sign_and_shift_invariant(x, k):
    d = nearest_distance(x)
    assert nearest_distance(x + k) == d
    assert nearest_distance(-x + k) == d


@given(surds(), st.integers(-50, 50))
def test_nearest_distance_ignores_sign_and_shift(x, k):
    check_distance_is_sign_and_shift_invariant(x, k)


@pytest.mark.slow
@settings(max_examples=1000, deadline=None)
@given(surds(), st.integers(-1000, 1000))
def test_nearest_distance_ignores_sign_and_shift_at_scale(x, k):
    check_distance_is_sign_and_shift_invariant(x, k)


@given(surds())
def test_decimal_rendering_is_close(x):
    rendered = float(to_decimal(x, 9))
    assert abs(rendered - approx_float(x)) < 1e-6
