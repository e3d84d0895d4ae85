"""Markoff triples, Markoff forms and the expansions of their roots.

A Markoff triple is a positive solution of ``m^2 + m1^2 + m2^2 = 3*m*m1*m2``
written with ``m >= m1 >= m2``. Every triple descends from ``(1, 1, 1)`` by
Vieta jumps, which is how :func:`enumerate_markoff` walks the tree;
:func:`brute_force_triples` is an independent quadratic-formula oracle.

For ``m > 2`` the positive root of the associated form has the purely periodic
expansion ``[0; (2, S, 1, 1, 2)]`` where ``S`` is the palindromic word built
from the Frobenius coordinates ``(mu, nu)`` of ``m``.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from contfrac import ContinuedFraction, finite_cf_value
from exact import DomainError, Number, QuadraticIrrational, as_qi

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 10_000
COORD_SLACK = 16


@dataclass(frozen=True, order=True)
class MarkoffTriple:
    m: int
    m1: int
    m2: int

    def __post_init__(self) -> None:
        m, m1, m2 = self.m, self.m1, self.m2
        if not m >= m1 >= m2 >= 1:
            raise DomainError(f"triple ({m}, {m1}, {m2}) must satisfy m >= m1 >= m2 >= 1")
        if m * m + m1 * m1 + m2 * m2 != 3 * m * m1 * m2:
            raise DomainError(f"({m}, {m1}, {m2}) is not a Markoff triple")

    @classmethod
    def sorted_from(cls, values: Iterable[int]) -> "MarkoffTriple":
        m, m1, m2 = sorted(values, reverse=True)
        return cls(m, m1, m2)

    def as_tuple(self) -> tuple[int, int, int]:
        return self.m, self.m1, self.m2


@dataclass(frozen=True)
class MarkoffForm:
    """The form ``m x^2 + (3m - 2u) x y + (v - 3u) y^2``."""

    m: int
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.u < 1:
            raise DomainError("form parameters m and u must be positive")
        if self.m * self.v != self.u * self.u + 1:
            raise DomainError(f"m*v must equal u^2 + 1 (m={self.m}, u={self.u}, v={self.v})")

    @property
    def A(self) -> int:
        return self.m

    @property
    def B(self) -> int:
        return 3 * self.m - 2 * self.u

    @property
    def C(self) -> int:
        return self.v - 3 * self.u

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def coefficients(self) -> tuple[int, int, int]:
        return self.A, self.B, self.C


@dataclass(frozen=True)
class FrobeniusCoordinates:
    mu: int
    nu: int

    def __post_init__(self) -> None:
        if self.mu < 1 or self.nu < 1:
            raise DomainError("Frobenius coordinates must be positive")
        if math.gcd(self.mu, self.nu) != 1:
            raise DomainError(f"({self.mu}, {self.nu}) is not a coprime pair")


@dataclass(frozen=True)
class UniquenessReport:
    bound: int
    triples: int
    distinct_maxima: int
    shared: tuple[int, ...]

    @property
    def unique(self) -> bool:
        return not self.shared


@dataclass(frozen=True)
class ConvergentIdentities:
    v_over_u: bool
    u_over_m: bool
    u_over_m_split: bool

    @property
    def all_hold(self) -> bool:
        return self.v_over_u and self.u_over_m and self.u_over_m_split


# ----------------------------------------------------------------------
# Triples


def triple_children(t: MarkoffTriple) -> list[MarkoffTriple]:
    """Neighbours of t in the Markoff tree with a strictly larger maximum."""
    m, m1, m2 = t.as_tuple()
    jumps = ((3 * m1 * m2 - m, m1, m2), (m, 3 * m * m2 - m1, m2), (m, m1, 3 * m * m1 - m2))
    children = {MarkoffTriple.sorted_from(j) for j in jumps if max(j) > m}
    return sorted(children)


def enumerate_markoff(bound: int) -> list[MarkoffTriple]:
    if bound < 1:
        raise DomainError("bound must be at least 1")
    return list(_markoff_tree(bound))


@lru_cache(maxsize=64)
def _markoff_tree(bound: int) -> tuple[MarkoffTriple, ...]:
    root = MarkoffTriple(1, 1, 1)
    seen = {root}
    queue = deque([root])
    while queue:
        for child in triple_children(queue.popleft()):
            if child.m <= bound and child not in seen:
                seen.add(child)
                queue.append(child)
    logger.debug("markoff tree up to %d: %d triples", bound, len(seen))
    return tuple(sorted(seen))


def brute_force_triples(bound: int, limit: int = BRUTE_FORCE_LIMIT) -> list[MarkoffTriple]:
    """All triples with m <= bound, found by solving for m over every (m1, m2)."""
    if bound < 1:
        raise DomainError("bound must be at least 1")
    if bound > limit:
        raise DomainError(f"brute force is limited to bound <= {limit}, got {bound}")
    found: set[MarkoffTriple] = set()
    for m1 in range(1, bound + 1):
        for m2 in range(1, m1 + 1):
            k = 3 * m1 * m2
            disc = k * k - 4 * (m1 * m1 + m2 * m2)
            if disc < 0:
                continue
            s = math.isqrt(disc)
            if s * s != disc or (k + s) % 2:
                continue
            for m in {(k + s) // 2, (k - s) // 2}:
                if m1 <= m <= bound:
                    found.add(MarkoffTriple(m, m1, m2))
    return sorted(found)


def markoff_numbers(bound: int) -> list[int]:
    return sorted({t.m for t in enumerate_markoff(bound)})


def markoff_triple_for(m: int, cap: int | None = None) -> MarkoffTriple:
    """The triple whose maximal element is m."""
    if m < 1:
        raise DomainError(f"{m} is not a Markoff number")
    if cap is not None and m > cap:
        raise DomainError(f"{m} exceeds the Markoff search cap {cap}")
    matches = [t for t in enumerate_markoff(m) if t.m == m]
    if not matches:
        raise DomainError(f"{m} is not a Markoff number")
    if len(matches) > 1:
        logger.warning("Markoff number %d is shared by %d triples", m, len(matches))
    return matches[0]


def uniqueness_scan(bound: int) -> UniquenessReport:
    triples = enumerate_markoff(bound)
    counts = Counter(t.m for t in triples)
    shared = tuple(sorted(m for m, n in counts.items() if n > 1))
    logger.info("uniqueness scan to %d: %d triples, %d shared maxima", bound, len(triples), len(shared))
    return UniquenessReport(bound, len(triples), len(counts), shared)


# ----------------------------------------------------------------------
# Forms


def markoff_form(t: MarkoffTriple) -> MarkoffForm:
    m = t.m
    # least positive x with m2*x = +-m1 (mod m); residue 0 stands for x = m
    inverse = pow(t.m2, -1, m)
    residues = ((t.m1 * inverse) % m, (-t.m1 * inverse) % m)
    u = min(r or m for r in residues)
    v, rem = divmod(u * u + 1, m)
    if rem:
        raise DomainError(f"{m} does not divide u^2 + 1 for u = {u}")
    return MarkoffForm(m, u, v)


def form_for(m: int, cap: int | None = None) -> MarkoffForm:
    return markoff_form(markoff_triple_for(m, cap))


def form_value(f: MarkoffForm, x: int, y: int) -> int:
    return f.A * x * x + f.B * x * y + f.C * y * y


def form_at(f: MarkoffForm, theta: Number) -> QuadraticIrrational:
    """Exact value of f(theta, 1)."""
    theta = as_qi(theta)
    return f.A * theta * theta + f.B * theta + f.C


def form_roots(f: MarkoffForm) -> tuple[QuadraticIrrational, QuadraticIrrational]:
    alpha = QuadraticIrrational(-f.B, 1, 2 * f.A, f.disc)
    beta = QuadraticIrrational(-f.B, -1, 2 * f.A, f.disc)
    return alpha, beta


def form_minimum_estimate(f: MarkoffForm, search_bound: int) -> tuple[int, tuple[int, int]]:
    """Least |f(x, y)| over 0 < max(|x|, |y|) <= search_bound.

    Among points attaining the minimum the witness is the one closest to the
    origin, preferring y == 0 and then nonnegative x.
    """
    if search_bound < 1:
        raise DomainError("search bound must be at least 1")
    best = None
    for x in range(-search_bound, search_bound + 1):
        for y in range(-search_bound, search_bound + 1):
            if x == 0 and y == 0:
                continue
            key = (abs(form_value(f, x, y)), max(abs(x), abs(y)), abs(y), x < 0, y < 0)
            if best is None or key < best[0]:
                best = (key, (x, y))
    (value, *_), witness = best
    return value, witness


def markoff_ratio(f: MarkoffForm) -> QuadraticIrrational:
    """m / sqrt(disc): the minimum of the form normalised by the root of its discriminant."""
    return QuadraticIrrational(0, f.m, f.disc, f.disc)


def roots_pm_equivalent(m: int) -> bool:
    """Whether the two roots of f_m differ, or sum, to an integer."""
    alpha, beta = form_roots(form_for(m))
    return any(x.is_rational and x.c == 1 for x in (alpha + beta, alpha - beta))


# ----------------------------------------------------------------------
# Frobenius word and expansions


def frobenius_word(c: FrobeniusCoordinates) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Return ``(runs, S)`` for the coordinates ``(mu, nu)``.

    ``runs[i-1] = floor(i*mu/nu) - floor((i-1)*mu/nu)`` for every
    ``1 <= i <= nu``, so the runs always sum to ``mu``.
    """
    mu, nu = c.mu, c.nu
    runs = tuple((i * mu) // nu - ((i - 1) * mu) // nu for i in range(1, nu + 1))
    if nu == 1:
        return runs, (1,) * (2 * mu - 2)
    word: list[int] = []
    for r in runs[:-1]:
        word.extend([1] * (2 * r))
        word.extend([2, 2])
    word.extend([1] * (2 * runs[-1] - 2))
    return runs, tuple(word)


def alpha_expansion(c: FrobeniusCoordinates) -> ContinuedFraction:
    _, word = frobenius_word(c)
    return ContinuedFraction((0,), (2, *word, 1, 1, 2))


def beta_expansions(c: FrobeniusCoordinates) -> tuple[ContinuedFraction, ContinuedFraction]:
    """Expansions of ``-beta - 2`` and ``beta + 3`` for the negative root beta."""
    _, word = frobenius_word(c)
    minus_beta_minus_2 = ContinuedFraction((0,), (1, 1, *word, 2, 2))
    beta_plus_3 = ContinuedFraction((0, 2), (*word, 2, 2, 1, 1))
    return minus_beta_minus_2, beta_plus_3


SPECIAL_ALPHA = {
    1: ContinuedFraction((0,), (1,)),
    2: ContinuedFraction((0,), (2,)),
}


def coordinate_budget(m: int, slack: int = COORD_SLACK) -> int:
    return 2 * m.bit_length() + slack


def coordinates_for(m: int, cap: int | None = None, slack: int = COORD_SLACK) -> FrobeniusCoordinates:
    """Coprime (mu, nu) with [0, 2, S(mu, nu), 2] == u/m."""
    if m <= 2:
        raise DomainError(f"Markoff number {m} has no Frobenius coordinates")
    f = form_for(m, cap)
    target = Fraction(f.u, m)
    budget = coordinate_budget(m, slack)
    for total in range(2, budget + 1):
        for mu in range(1, total):
            nu = total - mu
            if math.gcd(mu, nu) != 1:
                continue
            c = FrobeniusCoordinates(mu, nu)
            _, word = frobenius_word(c)
            if finite_cf_value((0, 2, *word, 2)) == target:
                logger.debug("coordinates of %d: (%d, %d)", m, mu, nu)
                return c
    raise DomainError(f"no Frobenius coordinates for {m} with mu + nu <= {budget}")


def convergent_identities(m: int) -> ConvergentIdentities:
    """Exact checks of v/u == [0, 2, S] and u/m == [0, 2, S, 2] == [0, 2, S, 1, 1]."""
    f = form_for(m)
    _, word = frobenius_word(coordinates_for(m))
    return ConvergentIdentities(
        v_over_u=finite_cf_value((0, 2, *word)) == Fraction(f.v, f.u),
        u_over_m=finite_cf_value((0, 2, *word, 2)) == Fraction(f.u, m),
        u_over_m_split=finite_cf_value((0, 2, *word, 1, 1)) == Fraction(f.u, m),
    )


__all__ = [
    "ConvergentIdentities",
    "FrobeniusCoordinates",
    "MarkoffForm",
    "MarkoffTriple",
    "SPECIAL_ALPHA",
    "UniquenessReport",
    "alpha_expansion",
    "beta_expansions",
    "brute_force_triples",
    "convergent_identities",
    "coordinates_for",
    "enumerate_markoff",
    "form_at",
    "form_for",
    "form_minimum_estimate",
    "form_roots",
    "form_value",
    "frobenius_word",
    "markoff_form",
    "markoff_numbers",
    "markoff_ratio",
    "markoff_triple_for",
    "roots_pm_equivalent",
    "triple_children",
    "uniqueness_scan",
]
