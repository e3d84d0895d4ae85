"""Run-length sequences, the Markoff-balanced families and root classification.

A :class:`RunLengthSeq` is an eventually periodic sequence of nonnegative
integers ``r(1), r(2), ...``. The predicates below are stated with 1-based
indices to match the usual notation; internally the sequence is unrolled into
a list padded with a dummy entry at position 0.

The families ``M01`` and ``M10`` are the Markoff-balanced sequences (step
condition A and first-difference condition B) with the extra boundary
conditions C01 and C10 respectively. Every periodic member that is not
constant from its second term on is made of blocks of one value separated by
single occurrences of the other; the block lengths form an M10 sequence with a
shorter period, which is how :func:`companion` finds the one other member of
an equivalence class.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from approx import (
    CertificateError,
    InconclusiveError,
    PhiCertificate,
    as_periodic_cf,
    certified_mu_sup,
    iter_mu,
    phi_certified,
)
from contfrac import ContinuedFraction, cf_expand, cf_shift, cf_value, least_rotation, primitive_period
from exact import DomainError, Number, QuadraticIrrational, as_qi, qi_floor, qi_frac, split_square
from markoff import SPECIAL_ALPHA, alpha_expansion, beta_expansions, coordinates_for, markoff_numbers

logger = logging.getLogger(__name__)

DEFAULT_MARKOFF_CAP = 1_000_000
DEFAULT_QMAX = 10_000
HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


class Family(str, enum.Enum):
    M01 = "M01"
    M10 = "M10"


class Verdict(str, enum.Enum):
    ALL_BELOW_3 = "all_below_3"
    VIOLATION = "violation"
    EXCLUDED = "excluded"


class Root(str, enum.Enum):
    ALPHA = "alpha"
    BETA_PLUS_3 = "beta_plus_3"


@dataclass(frozen=True)
class RunLengthSeq:
    """``pre`` followed by ``period`` repeated for ever, in canonical form."""

    pre: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        pre = tuple(int(v) for v in self.pre)
        period = tuple(int(v) for v in self.period)
        if not period:
            raise DomainError("a run-length sequence needs a nonempty period")
        if any(v < 0 for v in pre + period):
            raise DomainError("run lengths must be nonnegative")
        period = primitive_period(period)
        while pre and pre[-1] == period[-1]:
            pre = pre[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @classmethod
    def constant(cls, value: int) -> "RunLengthSeq":
        return cls((), (value,))

    def term(self, i: int) -> int:
        """0-based access."""
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def prefix(self, n: int) -> list[int]:
        return [self.term(i) for i in range(n)]

    def values(self) -> set[int]:
        return set(self.pre) | set(self.period)

    def __str__(self) -> str:
        return ",".join(map(str, self.pre)) + "|" + ",".join(map(str, self.period))


@dataclass(frozen=True)
class Decomposition:
    family: Family
    kind: str
    value: int
    derived: Optional[RunLengthSeq] = None


@dataclass(frozen=True)
class MuBoundVerdict:
    verdict: Verdict
    runs: Optional[RunLengthSeq] = None
    witness_n: Optional[int] = None
    witness_q: Optional[int] = None
    witness_mu: Optional[QuadraticIrrational] = None


@dataclass(frozen=True)
class MarkoffAttribution:
    m: int
    root: Root
    normalized_theta: QuadraticIrrational
    integer_shift: int
    sign: int


@dataclass(frozen=True)
class ClassificationResult:
    theta: QuadraticIrrational
    normalized: QuadraticIrrational
    shift: int
    sign: int
    expansion: ContinuedFraction
    verdict: MuBoundVerdict
    attribution: Optional[MarkoffAttribution] = None
    phi_bound: Optional[QuadraticIrrational] = None
    certificate: Optional[PhiCertificate] = None


# ----------------------------------------------------------------------
# Predicates


def _horizon(s: RunLengthSeq) -> int:
    # verdicts at index i depend only on i mod P once i > len(pre) + P
    return len(s.pre) + 3 * len(s.period) + 2


def _indexed(s: RunLengthSeq, horizon: int) -> list[int]:
    return [0] + s.prefix(2 * horizon + 2)


def _first_nonzero(r: list[int], i: int) -> int:
    for j in range(1, i):
        diff = r[i + j + 1] - r[i - j]
        if diff:
            return diff
    return 0


def _steps_bounded(r: list[int], horizon: int) -> bool:
    return all(abs(r[i + 1] - r[i]) <= 1 for i in range(1, horizon + 1))


def _first_differences_ok(r: list[int], horizon: int) -> bool:
    for i in range(1, horizon + 1):
        step = r[i + 1] - r[i]
        if step == -1 and _first_nonzero(r, i) < 0:
            return False
        if step == 1 and _first_nonzero(r, i) > 0:
            return False
    return True


def is_balanced(s: RunLengthSeq) -> bool:
    """Equal-length window sums differ by at most one."""
    span = len(s.pre) + 2 * len(s.period)
    values = s.prefix(2 * span + 1)
    for length in range(1, span + 1):
        sums = [sum(values[start : start + length]) for start in range(span + 1)]
        if max(sums) - min(sums) > 1:
            return False
    return True


def is_markoff_balanced(s: RunLengthSeq) -> bool:
    horizon = _horizon(s)
    r = _indexed(s, horizon)
    return _steps_bounded(r, horizon) and _first_differences_ok(r, horizon)


def in_m01(s: RunLengthSeq) -> bool:
    horizon = _horizon(s)
    r = _indexed(s, horizon)
    if not (_steps_bounded(r, horizon) and _first_differences_ok(r, horizon)):
        return False
    if r[1] > r[2]:
        return False
    for i in range(1, horizon + 1):
        if r[i + 1] - r[i] == -1 and not any(r[i + j + 1] > r[i - j] for j in range(1, i)):
            return False
    return True


def in_m10(s: RunLengthSeq) -> bool:
    horizon = _horizon(s)
    t = _indexed(s, horizon)
    if not (_steps_bounded(t, horizon) and _first_differences_ok(t, horizon)):
        return False
    if t[1] < t[2]:
        return False
    for i in range(1, horizon + 1):
        if t[i + 1] - t[i] == 1 and not any(t[i + j + 1] < t[i - j] for j in range(1, i)):
            return False
    return True


def in_family(s: RunLengthSeq, family: Family | str) -> bool:
    return in_m01(s) if Family(family) is Family.M01 else in_m10(s)


def equivalent_sequences(s: RunLengthSeq, t: RunLengthSeq) -> bool:
    """Whether the two sequences share a tail."""
    return least_rotation(s.period) == least_rotation(t.period)


# ----------------------------------------------------------------------
# Partial quotient shapes


def parse_runs(cf: ContinuedFraction, leading_two: bool) -> Optional[RunLengthSeq]:
    """Read the terms after a0 as ``[2,] 1_{2r(1)}, 2, 2, 1_{2r(2)}, 2, 2, ...``.

    Returns the run sequence, or None when the terms do not have that shape.
    """
    if not cf.period:
        return None
    h, P = len(cf.head), len(cf.period)
    idx = 1
    if leading_two:
        if cf.term(1) != 2:
            return None
        idx = 2
    runs: list[int] = []
    starts: dict[int, int] = {}
    while True:
        if idx >= h:
            state = (idx - h) % P
            if state in starts:
                first = starts[state]
                return RunLengthSeq(tuple(runs[:first]), tuple(runs[first:]))
            starts[state] = len(runs)
        ones = 0
        while cf.term(idx) == 1:
            ones += 1
            idx += 1
            if ones > h + P:
                return None
        if ones % 2 or cf.term(idx) != 2 or cf.term(idx + 1) != 2:
            return None
        idx += 2
        runs.append(ones // 2)


def mu_bound_classifier(theta: ContinuedFraction | Number) -> MuBoundVerdict:
    """Decide whether mu_n < 3 for every n, over the terms after a0.

    All terms stay below 3 exactly when the terms read as
    ``2, 1_{2r(1)}, 2, 2, 1_{2r(2)}, 2, 2, ...`` with runs in M01; the single
    sequence ``2, 1, 1, 1, ...`` is set apart. Otherwise the first n with
    ``mu_n >= 3`` is returned as a witness; n = 0 stands for q = 1, where
    mu_0 = [a1; a2, ...].
    """
    cf = as_periodic_cf(theta)
    if cf.term(1) < 2:
        raise DomainError(f"{cf}: the first partial quotient after a0 must be at least 2")
    if cf.term(1) >= 3:
        mu_0 = cf_value(cf_shift(cf, 1))
        return MuBoundVerdict(Verdict.VIOLATION, witness_n=0, witness_q=1, witness_mu=mu_0)
    if ContinuedFraction((0,) + cf.head[1:], cf.period) == ContinuedFraction((0, 2), (1,)):
        return MuBoundVerdict(Verdict.EXCLUDED)
    runs = parse_runs(cf, leading_two=True)
    if runs is not None and in_m01(runs):
        return MuBoundVerdict(Verdict.ALL_BELOW_3, runs=runs)
    sup = certified_mu_sup(cf)
    if sup.value < 3 or (sup.value == 3 and not sup.attained):
        raise CertificateError(f"{cf} keeps every mu_n below 3 but does not have the M01 shape")
    for n, q, mu in iter_mu(cf):
        if mu >= 3:
            logger.debug("mu_%d = %s >= 3 for %s", n, mu, cf)
            return MuBoundVerdict(Verdict.VIOLATION, runs=runs, witness_n=n, witness_q=q, witness_mu=mu)
    raise AssertionError("periodic expansions never run out of terms")


# ----------------------------------------------------------------------
# Decomposition and companions


def _count_blocks(s: RunLengthSeq, filler: int, marker: int) -> RunLengthSeq:
    """Counts c(i) with s == filler_{c(1)}, marker, filler_{c(2)}, marker, ..."""
    h, P = len(s.pre), len(s.period)
    pos = 0
    counts: list[int] = []
    starts: dict[int, int] = {}
    while True:
        if pos >= h:
            state = (pos - h) % P
            if state in starts:
                first = starts[state]
                return RunLengthSeq(tuple(counts[:first]), tuple(counts[first:]))
            starts[state] = len(counts)
        run = 0
        while s.term(pos) == filler:
            run += 1
            pos += 1
            if run > h + P:
                raise DomainError(f"{s} has no {marker} in its period")
        if s.term(pos) != marker:
            raise DomainError(f"{s} takes values other than {filler} and {marker}")
        pos += 1
        counts.append(run)


def _expand_blocks(counts: RunLengthSeq, filler: int, marker: int) -> RunLengthSeq:
    def blocks(values: tuple[int, ...]) -> tuple[int, ...]:
        out: list[int] = []
        for c in values:
            out.extend([filler] * c)
            out.append(marker)
        return tuple(out)

    return RunLengthSeq(blocks(counts.pre), blocks(counts.period))


def decompose(s: RunLengthSeq, family: Family | str) -> Decomposition:
    """Type of an M01 member (R0, R01, R) or an M10 member (T0, T10, T)."""
    family = Family(family)
    if not in_family(s, family):
        raise DomainError(f"{s} is not in {family.value}")
    if family is Family.M01:
        if s == RunLengthSeq.constant(0):
            raise DomainError("the zero sequence has no decomposition")
        top = max(s.values())
        if s.period == (top,) and not s.pre:
            return Decomposition(family, "R0", top)
        if s.period == (top,) and s.pre == (top - 1,):
            return Decomposition(family, "R01", top)
        derived = _count_blocks(s, filler=top - 1, marker=top)
        kind, value = "R", top
    else:
        low = min(s.values())
        if s.period == (low,) and not s.pre:
            return Decomposition(family, "T0", low)
        if s.period == (low,) and s.pre == (low + 1,):
            return Decomposition(family, "T10", low)
        derived = _count_blocks(s, filler=low + 1, marker=low)
        kind, value = "T", low
    if not any(derived.period):
        raise DomainError(f"{s} has a derived sequence that is eventually zero")
    if len(derived.period) >= len(s.period):
        raise DomainError(f"derived sequence {derived} of {s} does not have a shorter period")
    return Decomposition(family, kind, value, derived)


def recompose(d: Decomposition) -> RunLengthSeq:
    if d.kind in ("R0", "T0"):
        return RunLengthSeq.constant(d.value)
    if d.kind == "R01":
        return RunLengthSeq((d.value - 1,), (d.value,))
    if d.kind == "T10":
        return RunLengthSeq((d.value + 1,), (d.value,))
    if d.derived is None:
        raise DomainError(f"type {d.kind} needs a derived sequence")
    if d.kind == "R":
        return _expand_blocks(d.derived, filler=d.value - 1, marker=d.value)
    if d.kind == "T":
        return _expand_blocks(d.derived, filler=d.value + 1, marker=d.value)
    raise DomainError(f"unknown decomposition type {d.kind!r}")


_SWAP = {"R0": "R01", "R01": "R0", "T0": "T10", "T10": "T0"}


def companion(s: RunLengthSeq, family: Family | str) -> RunLengthSeq:
    """The other member of the family sharing a tail with s."""
    d = decompose(s, family)
    if d.kind in _SWAP:
        return recompose(Decomposition(d.family, _SWAP[d.kind], d.value))
    # block counts of either family read as an M10 sequence
    partner = companion(d.derived, Family.M10)
    return recompose(Decomposition(d.family, d.kind, d.value, partner))


def family_class(
    s: RunLengthSeq,
    family: Family | str,
    max_value: int,
    max_pre: Optional[int] = None,
) -> list[RunLengthSeq]:
    """Exhaustive list of family members equivalent to s.

    Candidates have a rotation of the period of s as period, a pre-period
    of length at most ``max_pre`` (default: period length + 2) and entries
    at most ``max_value``. Family members only take two adjacent values, so
    pre-period entries are drawn from the two values next to the period.
    """
    family = Family(family)
    if not in_family(s, family):
        raise DomainError(f"{s} is not in {family.value}")
    P = len(s.period)
    max_pre = P + 2 if max_pre is None else max_pre
    if family is Family.M01:
        top = max(s.period)
        choices = [v for v in (top - 1, top) if 0 <= v <= max_value]
    else:
        low = min(s.period)
        choices = [v for v in (low, low + 1) if v <= max_value]
    rotations = {s.period[i:] + s.period[:i] for i in range(P)}
    found: set[RunLengthSeq] = set()
    seen: set[RunLengthSeq] = set()
    for length in range(max_pre + 1):
        for pre in itertools.product(choices, repeat=length):
            for rot in rotations:
                candidate = RunLengthSeq(pre, rot)
                if candidate in seen:
                    continue
                seen.add(candidate)
                if in_family(candidate, family):
                    found.add(candidate)
    return sorted(found, key=lambda r: (len(r.pre), r.pre, r.period))


def m01_class(s: RunLengthSeq, max_value: int) -> list[RunLengthSeq]:
    return family_class(s, Family.M01, max_value)


# ----------------------------------------------------------------------
# Classification of quadratic irrationals


def normalize_pm(theta: Number) -> tuple[QuadraticIrrational, int, int]:
    """Return ``(theta', shift, sign)`` with theta' = sign*theta + shift in (0, 1/2)."""
    x = as_qi(theta)
    if x.is_rational:
        raise DomainError(f"{x} is rational")
    floor = qi_floor(x)
    frac = qi_frac(x)
    if frac < HALF:
        return frac, -floor, 1
    return 1 - frac, floor + 1, -1


def _minimal_polynomial(x: QuadraticIrrational) -> tuple[int, int, int]:
    A, B, C = x.c * x.c, -2 * x.a * x.c, x.a * x.a - x.b * x.b * x.d
    g = math.gcd(A, B, C)
    return A // g, B // g, C // g


def _match_markoff(cf: ContinuedFraction, radicand: int, cap: int) -> Optional[tuple[int, Root]]:
    for m in markoff_numbers(cap):
        if m <= 2 or split_square(9 * m * m - 4)[1] != radicand:
            continue
        c = coordinates_for(m)
        if alpha_expansion(c) == cf:
            return m, Root.ALPHA
        if beta_expansions(c)[1] == cf:
            return m, Root.BETA_PLUS_3
    return None


# alpha_1 and alpha_2 after +- normalization
_SPECIAL = {cf_expand(normalize_pm(cf_value(cf))[0]): m for m, cf in SPECIAL_ALPHA.items()}


def classify_theta(
    theta: Number,
    cap: int = DEFAULT_MARKOFF_CAP,
    qmax: int = DEFAULT_QMAX,
    certify: bool = False,
) -> ClassificationResult:
    """Attribute theta to a root of a Markoff form up to +- equivalence.

    The attribution is None exactly when phi(theta) <= 1/3; the result then
    carries either a violation witness (phi <= 1/mu_n <= 1/3) or a
    certificate for phi. ``certify`` adds the certificate in the witness
    case as well.
    """
    x = as_qi(theta)
    normalized, shift, sign = normalize_pm(x)
    cf = cf_expand(normalized)
    verdict = mu_bound_classifier(cf)
    base = dict(theta=x, normalized=normalized, shift=shift, sign=sign, expansion=cf, verdict=verdict)

    if verdict.verdict is Verdict.VIOLATION:
        certificate = phi_certified(cf, qmax) if certify else None
        return ClassificationResult(
            **base, phi_bound=verdict.witness_mu.reciprocal(), certificate=certificate
        )

    if cf in _SPECIAL:
        match: Optional[tuple[int, Root]] = (_SPECIAL[cf], Root.ALPHA)
    else:
        match = _match_markoff(cf, normalized.d, cap)
    if match is not None:
        m, root = match
        logger.info("%s is +- equivalent to the %s root of f_%d", x, root.value, m)
        return ClassificationResult(**base, attribution=MarkoffAttribution(m, root, normalized, shift, sign))

    A, B, C = _minimal_polynomial(normalized)
    if A > cap and B * B - 4 * A * C == 9 * A * A - 4:
        raise InconclusiveError(f"{x} may belong to a Markoff number above the cap {cap}")
    certificate = phi_certified(cf, qmax)
    if certificate.phi > THIRD:
        raise CertificateError(f"{x} has phi > 1/3 but matches no Markoff root up to {cap}")
    return ClassificationResult(**base, phi_bound=certificate.phi, certificate=certificate)


__all__ = [
    "ClassificationResult",
    "Decomposition",
    "Family",
    "MarkoffAttribution",
    "MuBoundVerdict",
    "Root",
    "RunLengthSeq",
    "Verdict",
    "classify_theta",
    "companion",
    "decompose",
    "equivalent_sequences",
    "family_class",
    "in_family",
    "in_m01",
    "in_m10",
    "is_balanced",
    "is_markoff_balanced",
    "m01_class",
    "mu_bound_classifier",
    "normalize_pm",
    "parse_runs",
    "recompose",
]
