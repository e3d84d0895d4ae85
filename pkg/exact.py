"""Exact arithmetic for rationals and real quadratic irrationals.

A quadratic irrational is stored as ``(a + b*sqrt(d)) / c`` over the integers
in a canonical form:

* ``c > 0`` and ``gcd(a, b, c) == 1``;
* ``d`` is squarefree and greater than one whenever ``b != 0`` (square
  factors of the radicand are pulled into ``b``);
* rationals are embedded with ``b == 0`` and ``d == 0``.

Because the representation is canonical, equality is a structural check.
Ordering never touches floating point: signs of ``a + b*sqrt(d)`` are decided
by comparing ``a*a`` against ``b*b*d``, and values living in different fields
are compared by squaring the difference until only one radical remains.

Rationals are plain :class:`fractions.Fraction` values; every operation here
accepts ``int`` and ``Fraction`` operands wherever a quadratic irrational is
expected.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

from sympy import factorint

logger = logging.getLogger(__name__)

Rational = Fraction


class DomainError(ValueError):
    """Raised when an operation is called outside its mathematical domain."""


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


class FieldOp(str, enum.Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


@lru_cache(maxsize=8192)
def split_square(d: int) -> tuple[int, int]:
    """Return ``(s, k)`` with ``d == s*s*k`` and ``k`` squarefree."""
    if d <= 1:
        return 1, d
    s, k = 1, 1
    for p, e in factorint(d).items():
        s *= p ** (e // 2)
        if e % 2:
            k *= p
    return s, k


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


def _sign_surd(a: int, b: int, d: int) -> int:
    """Sign of ``a + b*sqrt(d)`` for ``d`` squarefree (or ``b == 0``)."""
    if b == 0 or d == 0:
        return _sign(a)
    sa, sb = _sign(a), _sign(b)
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    diff = a * a - b * b * d
    if diff > 0:
        return sa
    if diff < 0:
        return sb
    return 0


def _canonical(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    if c == 0:
        raise DomainError("denominator c must be nonzero")
    if d < 0:
        raise DomainError(f"radicand {d} is negative; complex values are unsupported")
    if b != 0 and d == 0:
        raise DomainError("a nonzero surd coefficient needs a positive radicand")
    if b != 0:
        s, k = split_square(d)
        b *= s
        d = k
        if d == 1:
            a, b = a + b, 0
    if b == 0:
        d = 0
    if c < 0:
        a, b, c = -a, -b, -c
    g = math.gcd(a, b, c)
    if g > 1:
        a, b, c = a // g, b // g, c // g
    return a, b, c, d


Number = Union["QuadraticIrrational", int, Fraction]


@total_ordering
@dataclass(frozen=True, eq=False)
class QuadraticIrrational:
    """The real number ``(a + b*sqrt(d)) / c`` in canonical form."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        a, b, c, d = _canonical(int(self.a), int(self.b), int(self.c), int(self.d))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    # ------------------------------------------------------------------
    # Constructors and views

    @classmethod
    def from_rational(cls, value: Union[int, Fraction]) -> "QuadraticIrrational":
        value = Fraction(value)
        return cls(value.numerator, 0, value.denominator, 0)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise DomainError(f"{self} is irrational")
        return Fraction(self.a, self.c)

    def conjugate(self) -> "QuadraticIrrational":
        return QuadraticIrrational(self.a, -self.b, self.c, self.d)

    def sign(self) -> int:
        return _sign_surd(self.a, self.b, self.d)

    # ------------------------------------------------------------------
    # Arithmetic

    def __neg__(self) -> "QuadraticIrrational":
        return QuadraticIrrational(-self.a, -self.b, self.c, self.d)

    def __pos__(self) -> "QuadraticIrrational":
        return self

    def __abs__(self) -> "QuadraticIrrational":
        return -self if self.sign() < 0 else self

    def __add__(self, other: Number) -> "QuadraticIrrational":
        y = _coerce(other)
        if y is None:
            return NotImplemented
        d = _common_radicand(self, y)
        return QuadraticIrrational(
            self.a * y.c + y.a * self.c,
            self.b * y.c + y.b * self.c,
            self.c * y.c,
            d,
        )

    __radd__ = __add__

    def __sub__(self, other: Number) -> "QuadraticIrrational":
        y = _coerce(other)
        if y is None:
            return NotImplemented
        return self + (-y)

    def __rsub__(self, other: Number) -> "QuadraticIrrational":
        y = _coerce(other)
        if y is None:
            return NotImplemented
        return y + (-self)

    def __mul__(self, other: Number) -> "QuadraticIrrational":
        y = _coerce(other)
        if y is None:
            return NotImplemented
        d = _common_radicand(self, y)
        return QuadraticIrrational(
            self.a * y.a + self.b * y.b * d,
            self.a * y.b + self.b * y.a,
            self.c * y.c,
            d,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadraticIrrational":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise DomainError("division by zero")
        return QuadraticIrrational(self.c * self.a, -self.c * self.b, norm, self.d)

    def __truediv__(self, other: Number) -> "QuadraticIrrational":
        y = _coerce(other)
        if y is None:
            return NotImplemented
        _common_radicand(self, y)
        return self * y.reciprocal()

    def __rtruediv__(self, other: Number) -> "QuadraticIrrational":
        y = _coerce(other)
        if y is None:
            return NotImplemented
        return y / self

    # ------------------------------------------------------------------
    # Comparison, hashing, rendering

    def __eq__(self, other: object) -> bool:
        y = _coerce(other)
        if y is None:
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (y.a, y.b, y.c, y.d)

    def __lt__(self, other: Number) -> bool:
        y = _coerce(other)
        if y is None:
            return NotImplemented
        return qi_compare(self, y) is Ordering.LT

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.d))

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a) if self.c == 1 else f"{self.a}/{self.c}"
        op = "+" if self.b > 0 else "-"
        return f"({self.a}{op}{abs(self.b)}*sqrt({self.d}))/{self.c}"

    def __repr__(self) -> str:
        return f"QuadraticIrrational({self.a}, {self.b}, {self.c}, {self.d})"


def _coerce(value: object) -> QuadraticIrrational | None:
    if isinstance(value, QuadraticIrrational):
        return value
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, Fraction)):
        return QuadraticIrrational.from_rational(value)
    return None


def as_qi(value: Number) -> QuadraticIrrational:
    y = _coerce(value)
    if y is None:
        raise TypeError(f"cannot interpret {value!r} as an exact real")
    return y


def _common_radicand(x: QuadraticIrrational, y: QuadraticIrrational) -> int:
    if x.b == 0:
        return y.d
    if y.b == 0 or x.d == y.d:
        return x.d
    raise DomainError(f"operands live in different fields: sqrt({x.d}) and sqrt({y.d})")


# ----------------------------------------------------------------------
# Operations


def qi_make(a: int, b: int, c: int, d: int) -> QuadraticIrrational:
    """Canonical representative of ``(a + b*sqrt(d)) / c``."""
    return QuadraticIrrational(a, b, c, d)


def qi_sqrt(r: Union[int, Fraction]) -> QuadraticIrrational:
    r = Fraction(r)
    if r < 0:
        raise DomainError(f"sqrt of negative rational {r}")
    if r == 0:
        return QuadraticIrrational(0, 0, 1, 0)
    p, q = r.numerator, r.denominator
    return QuadraticIrrational(0, 1, q, p * q)


def qi_compare(x: Number, y: Number) -> Ordering:
    """Exact ordering of two real values.

    Values in the same field (or rationals) compare through the sign of the
    difference. Values with distinct radicands compare by writing
    ``c1*c2*(x - y)`` as ``u + v*sqrt(d1) - w*sqrt(d2)`` and squaring once.
    """
    x, y = as_qi(x), as_qi(y)
    if x.b == 0 or y.b == 0 or x.d == y.d:
        return Ordering((x - y).sign())
    u = x.a * y.c - y.a * x.c
    v = x.b * y.c
    w = y.b * x.c
    s_left = _sign_surd(u, v, x.d)
    s_right = _sign(w)
    if s_left != s_right:
        return Ordering.GT if s_left > s_right else Ordering.LT
    if s_left == 0:
        return Ordering.EQ
    squared = _sign_surd(u * u + v * v * x.d - w * w * y.d, 2 * u * v, x.d)
    return Ordering(squared if s_left > 0 else -squared)


def qi_field(x: Number, y: Number, op: Union[FieldOp, str]) -> QuadraticIrrational:
    x, y = as_qi(x), as_qi(y)
    op = FieldOp(op)
    if op is FieldOp.ADD:
        return x + y
    if op is FieldOp.SUB:
        return x - y
    if op is FieldOp.MUL:
        return x * y
    return x / y


def qi_floor(x: Number) -> int:
    x = as_qi(x)
    if x.b == 0:
        return x.a // x.c
    # b*sqrt(d) lies strictly between two consecutive integers
    s = math.isqrt(x.b * x.b * x.d)
    lower = s if x.b > 0 else -s - 1
    return (x.a + lower) // x.c


def qi_frac(x: Number) -> QuadraticIrrational:
    x = as_qi(x)
    return x - qi_floor(x)


def nearest_distance(x: Number) -> QuadraticIrrational:
    """Distance from x to the nearest integer, in [0, 1/2]."""
    f = qi_frac(x)
    g = 1 - f
    return f if f <= g else g


def to_decimal(x: Number, digits: int = 12) -> str:
    """Decimal rendering truncated toward zero. Display only."""
    x = as_qi(x)
    if digits < 0:
        raise DomainError("digits must be nonnegative")
    scale = 10 ** digits
    negative = x.sign() < 0
    n = qi_floor(abs(x) * scale)
    whole, part = divmod(n, scale)
    text = str(whole) if digits == 0 else f"{whole}.{part:0{digits}d}"
    return f"-{text}" if negative and n else text
