"""Continued fractions of rationals and quadratic irrationals.

A :class:`ContinuedFraction` is an integer head ``a0, a1, ..., ak`` followed
by an optional periodic tail. Instances are canonical on construction:

* finite expansions end with a partial quotient of at least 2 (unless the
  value is an integer);
* the period is primitive, and the head is as short as possible, so a head
  never ends with the element that would rotate into the period.

Canonical form makes value equality a structural check, which the Serret
test and the Markoff expansions below rely on.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import cycle, islice, zip_longest
from typing import Iterator, Sequence

from exact import DomainError, Number, Ordering, QuadraticIrrational, as_qi

logger = logging.getLogger(__name__)

Mobius = tuple[int, int, int, int]


def primitive_period(period: tuple[int, ...]) -> tuple[int, ...]:
    """Shortest word whose repetition gives period."""
    n = len(period)
    for k in range(1, n):
        if n % k == 0 and period[:k] * (n // k) == period:
            return period[:k]
    return period


def _canonical_cf(head: tuple[int, ...], period: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not head:
        raise DomainError("a continued fraction needs at least the term a0")
    if any(t < 1 for t in head[1:]) or any(t < 1 for t in period):
        raise DomainError("partial quotients after a0 must be positive")
    if not period:
        if len(head) > 1 and head[-1] == 1:
            head = head[:-2] + (head[-2] + 1,)
        return head, ()
    period = primitive_period(period)
    while len(head) > 1 and head[-1] == period[-1]:
        head = head[:-1]
        period = period[-1:] + period[:-1]
    return head, period


@dataclass(frozen=True)
class ContinuedFraction:
    head: tuple[int, ...]
    period: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        head, period = _canonical_cf(
            tuple(int(t) for t in self.head),
            tuple(int(t) for t in self.period),
        )
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "period", period)

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    @property
    def is_purely_periodic(self) -> bool:
        """True when the terms after a0 repeat from a1 on."""
        return self.is_periodic and len(self.head) == 1

    def term(self, i: int) -> int:
        if i < len(self.head):
            return self.head[i]
        if not self.period:
            raise IndexError(f"finite continued fraction has no term {i}")
        return self.period[(i - len(self.head)) % len(self.period)]

    def __str__(self) -> str:
        rest = [str(t) for t in self.head[1:]]
        if self.period:
            rest.append("(" + ",".join(str(t) for t in self.period) + ")")
        if not rest:
            return f"[{self.head[0]}]"
        return f"[{self.head[0]};" + ",".join(rest) + "]"


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


# ----------------------------------------------------------------------
# Term streams and Möbius maps


def cf_terms(cf: ContinuedFraction) -> Iterator[int]:
    yield from cf.head
    if cf.period:
        yield from cycle(cf.period)


def cf_shift(cf: ContinuedFraction, k: int) -> ContinuedFraction:
    """Continued fraction of the complete quotient starting at index k."""
    if k < 0:
        raise DomainError("shift must be nonnegative")
    if k < len(cf.head):
        return ContinuedFraction(cf.head[k:], cf.period)
    if not cf.period:
        raise DomainError(f"finite continued fraction has no term {k}")
    j = (k - len(cf.head)) % len(cf.period)
    rotated = cf.period[j:] + cf.period[:j]
    return ContinuedFraction(rotated[:1], rotated[1:] + rotated[:1])


def mobius_of(prefix: Sequence[int]) -> Mobius:
    """Matrix (h, h', k, k') with [prefix, t] == (h*t + h') / (k*t + k')."""
    h, h_prev, k, k_prev = 1, 0, 0, 1
    for a in prefix:
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
    return h, h_prev, k, k_prev


def apply_mobius(matrix: Mobius, x: Number) -> QuadraticIrrational:
    a, b, c, d = matrix
    x = as_qi(x)
    return (a * x + b) / (c * x + d)


def finite_cf_value(terms: Sequence[int]) -> Fraction:
    """Value of a literal list of partial quotients (canonical or not)."""
    if not terms:
        raise DomainError("empty continued fraction")
    value = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        if value == 0:
            raise DomainError(f"continued fraction {list(terms)} divides by zero")
        value = a + 1 / value
    return value


# ----------------------------------------------------------------------
# Operations


def _expand_rational(r: Fraction) -> ContinuedFraction:
    terms = []
    p, q = r.numerator, r.denominator
    while q:
        a, rem = divmod(p, q)
        terms.append(a)
        p, q = q, rem
    return ContinuedFraction(tuple(terms))


def cf_expand(x: Number) -> ContinuedFraction:
    """Continued fraction of a rational or quadratic irrational.

    The irrational case runs the classical (P + sqrt(D)) / Q recurrence with
    Q | D - P*P and stops at the first repeated (P, Q) state.
    """
    x = as_qi(x)
    if x.b == 0:
        return _expand_rational(Fraction(x.a, x.c))
    a, b, c = x.a, x.b, x.c
    if b < 0:
        a, b, c = -a, -b, -c
    P = a * abs(c)
    D = b * b * x.d * c * c
    Q = c * abs(c)
    s = math.isqrt(D)
    bound = max(10 * D, 64)
    seen: dict[tuple[int, int], int] = {}
    terms: list[int] = []
    while (P, Q) not in seen:
        if len(terms) > bound:
            raise RuntimeError(f"period detection exceeded {bound} steps for {x}")
        seen[(P, Q)] = len(terms)
        if Q > 0:
            q = (P + s) // Q
        else:
            q = -((P + s) // -Q) - 1
        terms.append(q)
        P = q * Q - P
        Q = (D - P * P) // Q
    start = seen[(P, Q)]
    logger.debug("expanded %s: %d steps, period starts at %d", x, len(terms), start)
    head, period = terms[:start], terms[start:]
    if not head:
        head, period = period[:1], period[1:] + period[:1]
    return ContinuedFraction(tuple(head), tuple(period))


@lru_cache(maxsize=8192)
def cf_value(cf: ContinuedFraction) -> QuadraticIrrational:
    if not cf.period:
        return QuadraticIrrational.from_rational(finite_cf_value(cf.head))
    # t = [p1; p2, ..., pk, t] solves q_k t^2 + (q_{k-1} - p_k) t - p_{k-1} = 0
    p, p_prev, q, q_prev = mobius_of(cf.period)
    lin = p - q_prev
    # reduced by the content, the radicand is the discriminant of the minimal form
    g = math.gcd(q, lin, p_prev)
    q, lin, p_prev = q // g, lin // g, p_prev // g
    disc = lin * lin + 4 * q * p_prev
    tail = QuadraticIrrational(lin, 1, 2 * q, disc)
    return apply_mobius(mobius_of(cf.head), tail)


def convergents(cf: ContinuedFraction, n: int) -> list[Convergent]:
    if n < 1:
        raise DomainError("at least one convergent must be requested")
    out = []
    h, h_prev, k, k_prev = 1, 0, 0, 1
    for i, a in enumerate(islice(cf_terms(cf), n)):
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
        out.append(Convergent(h, k, i))
    return out


def cf_compare(x: ContinuedFraction, y: ContinuedFraction) -> Ordering:
    """Order two continued fractions term by term.

    At the first differing index i, a smaller term means a smaller value when
    i is even and a larger value when i is odd. When one expansion is a
    finite prefix of the other, the finite one is larger if its last index is
    odd and smaller if it is even.
    """
    if x == y:
        return Ordering.EQ
    limit = (
        max(len(x.head), len(y.head))
        + max(1, len(x.period)) * max(1, len(y.period))
    )
    for i, (a, b) in enumerate(zip_longest(cf_terms(x), cf_terms(y))):
        if a is None or b is None:
            shorter_last = i - 1
            x_is_shorter = a is None
            finite_is_larger = shorter_last % 2 == 1
            if x_is_shorter:
                return Ordering.GT if finite_is_larger else Ordering.LT
            return Ordering.LT if finite_is_larger else Ordering.GT
        if a != b:
            if (a < b) == (i % 2 == 0):
                return Ordering.LT
            return Ordering.GT
        if i > limit:
            return Ordering.EQ
    return Ordering.EQ


def eval_with_tail(prefix: Sequence[int], tail: Number) -> QuadraticIrrational:
    """Exact value of [prefix..., tail] for a positive tail."""
    tail = as_qi(tail)
    if tail.sign() <= 0:
        raise DomainError(f"tail {tail} must be positive")
    if any(a < 1 for a in prefix[1:]):
        raise DomainError("partial quotients after a0 must be positive")
    if not prefix:
        return tail
    return apply_mobius(mobius_of(prefix), tail)


def least_rotation(period: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically least cyclic rotation."""
    return min(period[i:] + period[:i] for i in range(len(period)))


def serret_equivalent(x: ContinuedFraction, y: ContinuedFraction) -> bool:
    """Tail equivalence; all rationals are equivalent to one another."""
    if not x.period and not y.period:
        return True
    if not x.period or not y.period:
        return False
    return least_rotation(x.period) == least_rotation(y.period)


def equivalence_map(x: ContinuedFraction, y: ContinuedFraction) -> Mobius:
    """Unimodular (a, b, c, d) with (a*x + b) / (c*x + d) == y."""
    if not (x.period and y.period and serret_equivalent(x, y)):
        raise DomainError(f"{x} and {y} are not equivalent periodic expansions")
    n = len(x.period)
    r = next(i for i in range(n) if x.period[i:] + x.period[:i] == y.period)
    h, h_prev, k, k_prev = mobius_of(x.head + x.period[:r])
    inverse = (k_prev, -h_prev, -k, h)
    outer = mobius_of(y.head)
    a1, b1, c1, d1 = outer
    a2, b2, c2, d2 = inverse
    return (
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
    )

