"""Exact Diophantine approximation constants for quadratic irrationals.

For ``theta = [0; a1, a2, ...]`` the quantity ``q_n * ||q_n * theta||`` equals
``1 / mu_n`` with::

    mu_n = [0; a_n, ..., a_1] + [a_{n+1}; a_{n+2}, ...]

The first summand is ``q_{n-1} / q_n``. For an eventually periodic expansion
the second summand only depends on ``n`` modulo the period ``P``, and along
each residue class of ``n`` modulo ``2P`` the first summand approaches a
purely periodic limit from one fixed side. That structure turns
``sup mu_n`` into a finite computation, which is what
:func:`certified_mu_sup` does; :func:`phi_certified` and
:func:`markoff_value` build on it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Optional, Union

from contfrac import ContinuedFraction, cf_expand, cf_shift, cf_terms, cf_value
from exact import DomainError, Number, QuadraticIrrational, as_qi, nearest_distance
from markoff import form_for, form_roots

logger = logging.getLogger(__name__)

BRUTE_FORCE_CAP = 10_000
THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)

Theta = Union[ContinuedFraction, QuadraticIrrational, int, Fraction]


class InconclusiveError(RuntimeError):
    """A certified computation ran out of budget before it could conclude."""

    def __init__(self, message: str, partial: object = None) -> None:
        super().__init__(message)
        self.partial = partial


class CertificateError(AssertionError):
    """Two independent computations of the same exact quantity disagree."""


@dataclass(frozen=True)
class MuSupremum:
    """Exact ``sup mu_n`` over n >= 1.

    ``argmax`` lists every n attaining the supremum together with the
    matching convergent denominators. Both are empty when the supremum is
    only a limit; ``limit_classes`` then names the residues of n modulo
    ``modulus`` whose terms approach it from below.
    """

    value: QuadraticIrrational
    argmax: tuple[int, ...]
    argmax_q: tuple[int, ...]
    limit_classes: tuple[int, ...]
    checked_upto: int
    checked_q: int
    modulus: int

    @property
    def attained(self) -> bool:
        return bool(self.argmax)


@dataclass(frozen=True)
class PhiCertificate:
    theta: ContinuedFraction
    phi: QuadraticIrrational
    argmin_q: Optional[int]
    checked_upto: int
    method_notes: str
    argmins: tuple[int, ...] = ()
    status: str = "certified"

    @property
    def unique(self) -> bool:
        return len(self.argmins) == 1

    @property
    def attained(self) -> bool:
        return bool(self.argmins)


@dataclass
class RootCheck:
    root: str
    theta: QuadraticIrrational
    value: QuadraticIrrational
    matches_constant: bool
    exceeds_third: bool
    counterexamples: list[tuple[int, QuadraticIrrational]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.matches_constant and self.exceeds_third and not self.counterexamples


@dataclass
class MarkoffRootReport:
    m: int
    qmax: int
    constant: QuadraticIrrational
    checks: list[RootCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ----------------------------------------------------------------------
# Helpers


def as_periodic_cf(theta: Theta) -> ContinuedFraction:
    cf = theta if isinstance(theta, ContinuedFraction) else cf_expand(theta)
    if not cf.period:
        raise DomainError(f"{cf} is rational; only eventually periodic expansions are supported")
    return cf


def fractional_part(cf: ContinuedFraction) -> ContinuedFraction:
    """Expansion of theta - a0."""
    return ContinuedFraction((0,) + cf.head[1:], cf.period)


def _reversed_limit(cf: ContinuedFraction, n: int) -> QuadraticIrrational:
    """[0; a_n, a_{n-1}, ...] with the period continued backwards for ever."""
    P = len(cf.period)
    idx = (n - len(cf.head)) % P
    block = tuple(cf.period[(idx - i) % P] for i in range(P))
    return cf_value(ContinuedFraction((0,), block))


def _class_limit(cf: ContinuedFraction, n: int) -> QuadraticIrrational:
    return _reversed_limit(cf, n) + cf_value(cf_shift(cf, n + 1))


# ----------------------------------------------------------------------
# Operations


def q_distance(theta: Number, q: int) -> QuadraticIrrational:
    """Exact q * ||q * theta||."""
    if q < 1:
        raise DomainError("q must be a positive integer")
    return q * nearest_distance(q * as_qi(theta))


def iter_mu(theta: Theta) -> Iterator[tuple[int, int, QuadraticIrrational]]:
    """Yield ``(n, q_n, mu_n)`` for n = 1, 2, ... (endless for periodic input)."""
    cf = as_periodic_cf(theta)
    q_prev, q = 1, 0
    for n, a in enumerate(cf_terms(cf)):
        q, q_prev = a * q + q_prev, q
        if n == 0:
            continue
        yield n, q, Fraction(q_prev, q) + cf_value(cf_shift(cf, n + 1))


def mu_n(theta: Theta, n: int) -> QuadraticIrrational:
    """[0; a_n, ..., a_1] + [a_{n+1}; a_{n+2}, ...] over the terms after a0."""
    if n < 1:
        raise DomainError("n must be at least 1")
    for index, _, value in iter_mu(theta):
        if index == n:
            return value
    raise AssertionError("periodic expansions never run out of terms")


def certified_mu_sup(theta: Theta, qmax: Optional[int] = None) -> MuSupremum:
    """Exact supremum of mu_n over n >= 1.

    Terms are evaluated in order. Once n is past the head, the backward part
    of mu_n lies within ``1/K^2`` of its class limit, K being the continuant
    of the periodic terms ``a_h .. a_n``, and stays on the side of the limit
    it started on. Scanning stops when every class that approaches from
    above is provably under the best value seen.

    Raises InconclusiveError when q_n passes ``qmax`` first.
    """
    cf = as_periodic_cf(theta)
    h, P = len(cf.head), len(cf.period)
    modulus = 2 * P
    limits: dict[int, QuadraticIrrational] = {}
    above: dict[int, bool] = {}
    best: Optional[QuadraticIrrational] = None
    argmax: list[tuple[int, int]] = []
    k_cur, k_prev = 1, 0
    n = q = 0
    for n, q, mu in iter_mu(cf):
        if qmax is not None and q > qmax:
            partial = None
            if best is not None:
                partial = MuSupremum(
                    best, tuple(i for i, _ in argmax), tuple(d for _, d in argmax), (), n - 1, q, modulus
                )
            raise InconclusiveError(f"sup of mu_n for {cf} not certified before q_n exceeded {qmax}", partial)
        if best is None or mu > best:
            best, argmax = mu, [(n, q)]
        elif mu == best:
            argmax.append((n, q))
        if n < h:
            continue
        k_cur, k_prev = cf.term(n) * k_cur + k_prev, k_cur
        residue = n % modulus
        if residue not in limits:
            limits[residue] = _class_limit(cf, n)
            above[residue] = mu > limits[residue]
        if len(limits) < modulus:
            continue
        top = max([best, *(limits[r] for r in limits if not above[r])])
        envelope = Fraction(1, k_cur * k_cur)
        if all(limits[r] + envelope < top for r in limits if above[r]):
            break

    from_below = [r for r in limits if not above[r]]
    ceiling = max((limits[r] for r in from_below), default=None)
    logger.debug("sup mu_n for %s settled after %d terms (q_n = %d)", cf, n, q)
    if ceiling is None or best >= ceiling:
        return MuSupremum(
            best, tuple(i for i, _ in argmax), tuple(d for _, d in argmax), (), n, q, modulus
        )
    classes = tuple(sorted(r for r in from_below if limits[r] == ceiling))
    return MuSupremum(ceiling, (), (), classes, n, q, modulus)


def phi_certified(
    theta: Theta,
    qmax: int,
    brute_force_cap: int = BRUTE_FORCE_CAP,
) -> PhiCertificate:
    """Certified inf of q*||q*theta|| over positive integers q.

    Convergent denominators are covered through :func:`certified_mu_sup`
    (together with q = 1); every other q with q*||q*theta|| < 1/2 is a
    convergent denominator, so a minimum under 1/2 is final. Each q up to
    ``min(qmax, brute_force_cap)`` is additionally checked directly.
    """
    if qmax < 1:
        raise DomainError("qmax must be a positive integer")
    original = as_periodic_cf(theta)
    cf = fractional_part(original)
    x = cf_value(cf)
    try:
        sup = certified_mu_sup(cf, qmax)
    except InconclusiveError as exc:
        partial = None
        if exc.partial is not None:
            partial = PhiCertificate(
                theta=original,
                phi=exc.partial.value.reciprocal(),
                argmin_q=None,
                checked_upto=qmax,
                method_notes=f"convergent scan stopped at n={exc.partial.checked_upto}",
                status="inconclusive",
            )
        raise InconclusiveError(str(exc), partial) from exc

    at_one = q_distance(x, 1)
    from_sup = sup.value.reciprocal()
    if at_one < from_sup:
        phi, argmins = at_one, (1,)
    else:
        phi = from_sup
        argmins = tuple(sorted(set(sup.argmax_q) | ({1} if at_one == from_sup else set())))

    for n, q in zip(sup.argmax, sup.argmax_q):
        if q_distance(x, q) != sup.value.reciprocal():
            raise CertificateError(f"q*||q*theta|| at q={q} disagrees with 1/mu_{n} for {original}")

    limit = min(qmax, brute_force_cap)
    for q in range(1, limit + 1):
        d = q_distance(x, q)
        if d < phi or (d == phi and q not in argmins):
            raise CertificateError(f"direct scan found q={q} with q*||q*theta|| = {d} against phi = {phi}")

    notes = (
        f"convergents to n={sup.checked_upto} (q_n={sup.checked_q}), "
        f"residue classes mod {sup.modulus}, direct scan q<={limit}"
    )
    cert = PhiCertificate(
        theta=original,
        phi=phi,
        argmin_q=argmins[0] if argmins else None,
        checked_upto=max(sup.checked_q, limit),
        method_notes=notes,
        argmins=argmins,
    )
    if phi >= HALF:
        partial = replace(cert, status="inconclusive")
        raise InconclusiveError(f"minimum {phi} for {original} is not below 1/2", partial)
    if len(argmins) > 1:
        logger.info("phi of %s attained at several q: %s", original, argmins)
    return cert


def markoff_value(theta: Theta) -> QuadraticIrrational:
    """lim inf of q*||q*theta||: the reciprocal of the largest class limit of mu_n."""
    cf = fractional_part(as_periodic_cf(theta))
    h, P = len(cf.head), len(cf.period)
    return max(_class_limit(cf, n) for n in range(h, h + P)).reciprocal()


def markoff_constant(m: int) -> QuadraticIrrational:
    """m*||m*theta|| for a root theta of f_m, i.e. (3m^2 - m*sqrt(9m^2 - 4)) / 2."""
    if m < 1:
        raise DomainError("m must be positive")
    return QuadraticIrrational(3 * m * m, -m, 2, 9 * m * m - 4)


def verify_markoff_roots(m: int, qmax: int) -> MarkoffRootReport:
    """Check m*||m*theta|| against the closed form and its strict minimality up to qmax.

    Both theta = alpha_m and theta = beta_m + 3 are examined.
    """
    if qmax < m:
        raise DomainError(f"qmax={qmax} must be at least m={m}")
    alpha, beta = form_roots(form_for(m))
    constant = markoff_constant(m)
    checks = []
    for root, theta in (("alpha", alpha), ("beta_plus_3", beta + 3)):
        value = q_distance(theta, m)
        check = RootCheck(root, theta, value, value == constant, constant > THIRD)
        for q in range(1, qmax + 1):
            if q == m:
                continue
            d = q_distance(theta, q)
            if d <= constant:
                check.counterexamples.append((q, d))
        if not check.passed:
            logger.warning("root check failed for m=%d (%s): %s", m, root, check)
        checks.append(check)
    return MarkoffRootReport(m, qmax, constant, checks)


__all__ = [
    "BRUTE_FORCE_CAP",
    "CertificateError",
    "InconclusiveError",
    "MarkoffRootReport",
    "MuSupremum",
    "PhiCertificate",
    "RootCheck",
    "as_periodic_cf",
    "certified_mu_sup",
    "fractional_part",
    "iter_mu",
    "markoff_constant",
    "markoff_value",
    "mu_n",
    "phi_certified",
    "q_distance",
    "verify_markoff_roots",
]
