"""Text grammars and JSON records for the MarkoffLab front ends.

Three input grammars are understood:

* quadratic irrationals ``(a+b*sqrt(d))/c``, ``a+sqrt(d)``, ``-sqrt(d)``,
  ``b*sqrt(d)`` and plain rationals ``p`` or ``p/q``;
* continued fractions ``[a0; a1, ..., (p1, ..., pk)]`` with an optional
  parenthesised period;
* run-length sequences ``pre|period`` as comma separated integers.

Every value written by the ``*_record`` builders uses the same grammars, so
records parse back into the values they were built from.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Dict, List, Optional

from approx import MarkoffRootReport, MuSupremum, PhiCertificate
from contfrac import ContinuedFraction, cf_expand, cf_value
from exact import DomainError, Number, QuadraticIrrational, as_qi, to_decimal
from markoff import (
    FrobeniusCoordinates,
    MarkoffForm,
    MarkoffTriple,
    convergent_identities,
    coordinates_for,
    enumerate_markoff,
    form_for,
    form_roots,
    frobenius_word,
    markoff_triple_for,
    uniqueness_scan,
)
from seqlab import (
    ClassificationResult,
    Decomposition,
    MarkoffAttribution,
    MuBoundVerdict,
    RunLengthSeq,
)

DEFAULT_PRECISION = 12

_RATIONAL = re.compile(r"^[+-]?\d+(?:\s*/\s*\d+)?$")
_PAREN_FRACTION = re.compile(r"^\((?P<num>.+)\)\s*/\s*(?P<c>[+-]?\d+)$")
_BARE_FRACTION = re.compile(r"^(?P<num>.+?)\s*/\s*(?P<c>[+-]?\d+)$")
_SURD = re.compile(
    r"^(?:(?P<a>[+-]?\d+)\s*(?=[+-]))?"
    r"(?P<sign>[+-])?\s*"
    r"(?:(?P<b>\d+)\s*\*\s*)?"
    r"sqrt\(\s*(?P<d>\d+)\s*\)$"
)
_CF = re.compile(r"^\[\s*(?P<a0>[+-]?\d+)\s*(?:[;,](?P<rest>.*))?\]$")


class ParseError(ValueError):
    """Raised when a textual value does not follow its grammar."""


# ----------------------------------------------------------------------
# Parsers


def _ints(text: str, what: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    if parts and parts[-1] == "":
        parts.pop()
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ParseError(f"malformed {what} {text!r}") from exc


def _numerator(text: str) -> QuadraticIrrational:
    text = text.strip()
    if _RATIONAL.match(text):
        return as_qi(Fraction(text.replace(" ", "")))
    match = _SURD.match(text)
    if not match:
        raise ParseError(f"cannot read {text!r} as a + b*sqrt(d)")
    a = int(match["a"] or 0)
    b = int(match["b"] or 1)
    if match["sign"] == "-":
        b = -b
    return QuadraticIrrational(a, b, 1, int(match["d"]))


def parse_qi(text: str) -> QuadraticIrrational:
    """Parse ``(a+b*sqrt(d))/c`` and its shorter spellings."""
    raw = text.strip()
    if not raw:
        raise ParseError("empty number")
    try:
        if _RATIONAL.match(raw):
            return as_qi(Fraction(raw.replace(" ", "")))
        match = _PAREN_FRACTION.match(raw) or _BARE_FRACTION.match(raw)
        if match:
            num, c = match["num"], int(match["c"])
        else:
            num, c = raw, 1
        num = num.strip()
        if num.startswith("(") and num.endswith(")"):
            num = num[1:-1]
        if c == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return _numerator(num) / c
    except (DomainError, ZeroDivisionError) as exc:
        raise ParseError(f"{text!r} is not a valid real: {exc}") from exc


def parse_cf(text: str) -> ContinuedFraction:
    """Parse ``[a0; a1, ..., (p1, ..., pk)]``; ``,`` is accepted after a0 too."""
    match = _CF.match(text.strip())
    if not match:
        raise ParseError(f"malformed continued fraction {text!r}")
    head = [int(match["a0"])]
    period: tuple[int, ...] = ()
    rest = (match["rest"] or "").strip()
    rest = rest.replace(";", ",")
    if "(" in rest:
        if not rest.endswith(")") or rest.count("(") != 1:
            raise ParseError(f"the period of {text!r} must be a final parenthesised block")
        before, inside = rest[:-1].split("(")
        head.extend(_ints(before, "continued fraction head"))
        period = _ints(inside, "continued fraction period")
        if not period:
            raise ParseError(f"empty period in {text!r}")
    elif rest:
        head.extend(_ints(rest, "continued fraction"))
    try:
        return ContinuedFraction(tuple(head), period)
    except DomainError as exc:
        raise ParseError(f"{text!r} is not a valid continued fraction: {exc}") from exc


def parse_seq(text: str) -> RunLengthSeq:
    """Parse ``pre|period``, e.g. ``|1`` or ``0,1|1,2``."""
    if text.count("|") != 1:
        raise ParseError(f"run-length sequence {text!r} needs exactly one '|'")
    pre, period = text.split("|")
    values = _ints(period, "period")
    if not values:
        raise ParseError(f"run-length sequence {text!r} has an empty period")
    try:
        return RunLengthSeq(_ints(pre, "pre-period") if pre.strip() else (), values)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def parse_theta(text: str) -> QuadraticIrrational:
    """A real given either as a continued fraction or as a surd."""
    if text.strip().startswith("["):
        return cf_value(parse_cf(text))
    return parse_qi(text)


# ----------------------------------------------------------------------
# Records


def value_record(x: Number, precision: int = DEFAULT_PRECISION) -> Dict[str, str]:
    return {"exact": str(as_qi(x)), "decimal": to_decimal(x, precision)}


def triple_record(t: MarkoffTriple) -> Dict[str, int]:
    return {"m": t.m, "m1": t.m1, "m2": t.m2}


def form_record(f: MarkoffForm) -> Dict[str, int]:
    return {"m": f.m, "u": f.u, "v": f.v, "A": f.A, "B": f.B, "C": f.C, "disc": f.disc}


def coordinates_record(c: Optional[FrobeniusCoordinates]) -> Optional[Dict[str, int]]:
    if c is None:
        return None
    return {"mu": c.mu, "nu": c.nu}


def certificate_record(cert: PhiCertificate, precision: int = DEFAULT_PRECISION) -> Dict[str, Any]:
    return {
        "theta": str(cert.theta),
        "phi": str(cert.phi),
        "phi_decimal": to_decimal(cert.phi, precision),
        "argmin_q": cert.argmin_q,
        "argmins": list(cert.argmins),
        "checked_upto": cert.checked_upto,
        "status": cert.status,
        "method_notes": cert.method_notes,
    }


def mu_sup_record(sup: MuSupremum, precision: int = DEFAULT_PRECISION) -> Dict[str, Any]:
    return {
        "value": value_record(sup.value, precision),
        "argmax": list(sup.argmax),
        "argmax_q": list(sup.argmax_q),
        "limit_classes": list(sup.limit_classes),
        "modulus": sup.modulus,
        "checked_upto": sup.checked_upto,
    }


def attribution_record(att: Optional[MarkoffAttribution]) -> Optional[Dict[str, Any]]:
    if att is None:
        return None
    return {"m": att.m, "root": att.root.value, "shift": att.integer_shift, "sign": att.sign}


def verdict_record(v: MuBoundVerdict, precision: int = DEFAULT_PRECISION) -> Dict[str, Any]:
    out: Dict[str, Any] = {"verdict": v.verdict.value, "runs": str(v.runs) if v.runs else None}
    if v.witness_mu is not None:
        out["witness"] = {
            "n": v.witness_n,
            "q": v.witness_q,
            "mu": value_record(v.witness_mu, precision),
        }
    return out


def classification_record(res: ClassificationResult, precision: int = DEFAULT_PRECISION) -> Dict[str, Any]:
    return {
        "theta": str(res.theta),
        "normalized": str(res.normalized),
        "expansion": str(res.expansion),
        "shift": res.shift,
        "sign": res.sign,
        "attribution": attribution_record(res.attribution),
        "verdict": verdict_record(res.verdict, precision),
        "phi_bound": value_record(res.phi_bound, precision) if res.phi_bound is not None else None,
        "certificate": certificate_record(res.certificate, precision) if res.certificate else None,
    }


def decomposition_record(d: Decomposition) -> Dict[str, Any]:
    return {
        "family": d.family.value,
        "type": d.kind,
        "value": d.value,
        "derived": str(d.derived) if d.derived is not None else None,
    }


def root_report_record(report: MarkoffRootReport, precision: int = DEFAULT_PRECISION) -> Dict[str, Any]:
    return {
        "m": report.m,
        "qmax": report.qmax,
        "constant": value_record(report.constant, precision),
        "passed": report.passed,
        "roots": [
            {
                "root": c.root,
                "theta": str(c.theta),
                "expansion": str(cf_expand(c.theta)),
                "value": str(c.value),
                "matches_constant": c.matches_constant,
                "exceeds_third": c.exceeds_third,
                "counterexamples": [{"q": q, "value": str(d)} for q, d in c.counterexamples],
            }
            for c in report.checks
        ],
    }


def partial_record(partial: object, precision: int = DEFAULT_PRECISION) -> Optional[Dict[str, Any]]:
    """Record for the partial result carried by an InconclusiveError."""
    if isinstance(partial, PhiCertificate):
        return certificate_record(partial, precision)
    if isinstance(partial, MuSupremum):
        return mu_sup_record(partial, precision)
    return None


def form_polynomial(f: MarkoffForm) -> str:
    """``5x^2+11xy-5y^2`` style rendering; unit coefficients are dropped."""
    out = ""
    for coeff, mono in ((f.A, "x^2"), (f.B, "xy"), (f.C, "y^2")):
        if coeff == 0:
            continue
        sign = "-" if coeff < 0 else ("+" if out else "")
        mag = "" if abs(coeff) == 1 else str(abs(coeff))
        out += f"{sign}{mag}{mono}"
    return out


def tree_report(bound: int) -> Dict[str, Any]:
    triples = enumerate_markoff(bound)
    report = uniqueness_scan(bound)
    return {
        "bound": bound,
        "count": len(triples),
        "max_m": max(t.m for t in triples),
        "distinct_maxima": report.distinct_maxima,
        "unique": report.unique,
        "shared": list(report.shared),
        "triples": [triple_record(t) for t in triples],
    }


def form_report(
    m: int,
    cap: Optional[int] = None,
    slack: Optional[int] = None,
    precision: int = DEFAULT_PRECISION,
) -> Dict[str, Any]:
    """Triple, form, roots and root expansions of the Markoff number m.

    Frobenius coordinates, the word S and the convergent identities are
    included for m > 2 and left as None otherwise.
    """
    f = form_for(m, cap)
    alpha, beta = form_roots(f)
    record: Dict[str, Any] = {
        "triple": triple_record(markoff_triple_for(m, cap)),
        "form": form_record(f),
        "polynomial": form_polynomial(f),
        "alpha": value_record(alpha, precision),
        "beta": value_record(beta, precision),
        "alpha_expansion": str(cf_expand(alpha)),
        "minus_beta_minus_2_expansion": str(cf_expand(-beta - 2)),
        "beta_plus_3_expansion": str(cf_expand(beta + 3)),
        "coordinates": None,
        "word": None,
        "identities": None,
    }
    if m > 2:
        coords = coordinates_for(m, cap) if slack is None else coordinates_for(m, cap, slack)
        ids = convergent_identities(m)
        record.update(
            coordinates=coordinates_record(coords),
            word=list(frobenius_word(coords)[1]),
            identities={"v_over_u": ids.v_over_u, "u_over_m": ids.u_over_m},
        )
    return record


def flatten(record: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Dotted-key view of a nested record, used for CSV rows."""
    out: Dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(flatten(value, name + "."))
        elif isinstance(value, list):
            out[name] = ";".join(str(v) for v in value)
        else:
            out[name] = value
    return out


def text_lines(record: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(record, dict):
        lines = []
        for key, value in record.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(text_lines(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
        return lines
    if isinstance(record, list):
        lines = []
        for item in record:
            if isinstance(item, dict):
                lines.extend(text_lines(item, indent))
                lines.append("")
            else:
                lines.append(f"{pad}- {item}")
        return lines
    return [f"{pad}{record}"]


__all__ = [
    "DEFAULT_PRECISION",
    "ParseError",
    "attribution_record",
    "certificate_record",
    "classification_record",
    "coordinates_record",
    "decomposition_record",
    "flatten",
    "form_polynomial",
    "form_record",
    "form_report",
    "mu_sup_record",
    "parse_cf",
    "parse_qi",
    "parse_seq",
    "parse_theta",
    "partial_record",
    "root_report_record",
    "text_lines",
    "tree_report",
    "triple_record",
    "value_record",
    "verdict_record",
]
