"""Command-line front end for MarkoffLab.

Every subcommand parses its exact inputs, delegates to the library modules
and prints one record on stdout::

    python cli.py tree --bound 1000 --output json
    python cli.py form --m 5
    python cli.py phi --theta "[0;(2,1,1,2)]" --qmax 10000
    python cli.py classify --theta "(-11+1*sqrt(221))/10"
    python cli.py companion --seq "|1"

Numbers are given as ``(a+b*sqrt(d))/c`` or as continued fractions
``[a0; a1, ..., (p1, ..., pk)]``; run-length sequences as ``pre|period``.
Defaults for the budgets come from :class:`config.Config`.

Exit codes: 0 success, 2 usage or parse error, 3 domain error, 4 when a
certified computation could not conclude within its budget (the partial
result, if any, is still printed), 5 when a verification reports
counterexamples or an internal cross-check disagrees.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

from approx import CertificateError, InconclusiveError, markoff_value, phi_certified, verify_markoff_roots
from certificate_ledger import CertificateLedger
from config import Config
from contfrac import cf_expand
from exact import DomainError, to_decimal
from formats import (
    ParseError,
    certificate_record,
    classification_record,
    decomposition_record,
    flatten,
    form_report,
    parse_seq,
    parse_theta,
    partial_record,
    root_report_record,
    text_lines,
    tree_report,
    value_record,
)
from markoff import brute_force_triples, markoff_triple_for, uniqueness_scan
from seqlab import (
    Family,
    classify_theta,
    companion,
    decompose,
    in_m01,
    in_m10,
    is_balanced,
    is_markoff_balanced,
)

logger = logging.getLogger("markofflab.cli")

OUTPUTS = ("json", "csv", "text")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_INCONCLUSIVE = 4
EXIT_FAILED = 5


@dataclass(frozen=True)
class CliConfig:
    precision: int = Config.PRECISION
    qmax: int = Config.QMAX
    markoff_cap: int = Config.MARKOFF_CAP
    output: str = Config.OUTPUT
    record: bool = False

    def __post_init__(self) -> None:
        if self.precision < 1:
            raise ValueError(f"precision must be at least 1, got {self.precision}")
        if self.qmax < 1:
            raise ValueError(f"qmax must be at least 1, got {self.qmax}")
        if self.qmax > Config.MAX_QMAX:
            raise ValueError(f"qmax must be at most {Config.MAX_QMAX}, got {self.qmax}")
        if self.markoff_cap < 5:
            raise ValueError(f"the Markoff cap must be at least 5, got {self.markoff_cap}")
        if self.markoff_cap > Config.MAX_BOUND:
            raise ValueError(f"the Markoff cap must be at most {Config.MAX_BOUND}, got {self.markoff_cap}")
        if self.output not in OUTPUTS:
            raise ValueError(f"output must be one of {', '.join(OUTPUTS)}, got {self.output!r}")


@dataclass
class CommandResult:
    kind: str
    record: Dict[str, Any]
    rows: Optional[List[Dict[str, Any]]] = None
    passed: bool = True


# ----------------------------------------------------------------------
# Commands


def cmd_tree(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    record = tree_report(args.bound)
    if args.oracle:
        if args.bound > Config.TRIPLE_ORACLE_CAP:
            raise DomainError(f"the brute-force oracle only runs up to {Config.TRIPLE_ORACLE_CAP}")
        oracle = brute_force_triples(args.bound, Config.TRIPLE_ORACLE_CAP)
        record["oracle_agrees"] = [t.as_tuple() for t in oracle] == [
            (r["m"], r["m1"], r["m2"]) for r in record["triples"]
        ]
    return CommandResult("tree", record, record["triples"])


def cmd_uniqueness(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    report = uniqueness_scan(args.bound)
    record = {
        "bound": report.bound,
        "triples": report.triples,
        "distinct_maxima": report.distinct_maxima,
        "shared": list(report.shared),
        "unique": report.unique,
    }
    return CommandResult("uniqueness", record)


def cmd_form(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    record = form_report(args.m, cfg.markoff_cap, Config.COORD_SLACK, cfg.precision)
    return CommandResult("form", record)


def cmd_expand(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    theta = parse_theta(args.theta)
    record = {
        "theta": str(theta),
        "decimal": to_decimal(theta, cfg.precision),
        "expansion": str(cf_expand(theta)),
    }
    return CommandResult("expand", record)


def cmd_phi(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    theta = parse_theta(args.theta)
    cert = phi_certified(cf_expand(theta), cfg.qmax, Config.BRUTE_FORCE_CAP)
    return CommandResult("phi", certificate_record(cert, cfg.precision))


def cmd_value(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    theta = parse_theta(args.theta)
    value = markoff_value(cf_expand(theta))
    record = {
        "theta": str(cf_expand(theta)),
        "value": value_record(value, cfg.precision),
        "exceeds_third": value * 3 > 1,
    }
    return CommandResult("value", record)


def cmd_verify(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    if cfg.qmax > Config.MAX_SCAN:
        raise ParseError(f"verify scans every q up to qmax; qmax must be at most {Config.MAX_SCAN}")
    markoff_triple_for(args.m, cfg.markoff_cap)
    report = verify_markoff_roots(args.m, cfg.qmax)
    return CommandResult("verify", root_report_record(report, cfg.precision), passed=report.passed)


def cmd_classify(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    theta = parse_theta(args.theta)
    result = classify_theta(theta, cfg.markoff_cap, cfg.qmax, certify=args.certify)
    return CommandResult("classify", classification_record(result, cfg.precision))


def cmd_companion(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    s = parse_seq(args.seq)
    record = {"seq": str(s), "family": args.family, "companion": str(companion(s, args.family))}
    return CommandResult("companion", record)


def cmd_decompose(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    s = parse_seq(args.seq)
    record = {"seq": str(s), **decomposition_record(decompose(s, args.family))}
    return CommandResult("decompose", record)


def cmd_check(args: argparse.Namespace, cfg: CliConfig) -> CommandResult:
    s = parse_seq(args.seq)
    record = {
        "seq": str(s),
        "balanced": is_balanced(s),
        "markoff_balanced": is_markoff_balanced(s),
        "M01": in_m01(s),
        "M10": in_m10(s),
    }
    return CommandResult("check", record)


COMMANDS: Dict[str, Callable[[argparse.Namespace, CliConfig], CommandResult]] = {
    "tree": cmd_tree,
    "uniqueness": cmd_uniqueness,
    "form": cmd_form,
    "expand": cmd_expand,
    "phi": cmd_phi,
    "value": cmd_value,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "companion": cmd_companion,
    "decompose": cmd_decompose,
    "check": cmd_check,
}


# ----------------------------------------------------------------------
# Argument parsing and output


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _bound(text: str) -> int:
    value = _positive_int(text)
    if value > Config.MAX_BOUND:
        raise argparse.ArgumentTypeError(f"bound must be at most {Config.MAX_BOUND}, got {value}")
    return value


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Return parsed command-line arguments."""

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--qmax", type=int, default=Config.QMAX, help="Largest convergent denominator to examine")
    common.add_argument("--cap", type=int, default=Config.MARKOFF_CAP, help="Largest Markoff number searched")
    common.add_argument("--output", choices=OUTPUTS, default=Config.OUTPUT, help="Output format (default: json)")
    common.add_argument("--precision", type=int, default=Config.PRECISION, help="Digits in decimal renderings")
    common.add_argument("--record", action="store_true", help="Append the emitted record to the certificate ledger")
    common.add_argument("--log-level", default=Config.LOG_LEVEL, help="Logging level (default: WARNING)")

    parser = argparse.ArgumentParser(prog="markofflab", description="Exact Markoff approximation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("tree", "uniqueness"):
        p = sub.add_parser(name, parents=[common], help=f"{name} of Markoff triples up to a bound")
        p.add_argument("--bound", type=_bound, required=True)
        if name == "tree":
            p.add_argument("--oracle", action="store_true", help="Cross-check against the brute-force solver")

    for name in ("form", "verify"):
        p = sub.add_parser(name, parents=[common], help=f"{name} for the Markoff number m")
        p.add_argument("--m", type=_positive_int, required=True)

    for name in ("expand", "phi", "value", "classify"):
        p = sub.add_parser(name, parents=[common], help=f"{name} of a quadratic irrational")
        p.add_argument("--theta", required=True)
        if name == "classify":
            p.add_argument("--certify", action="store_true", help="Attach a phi certificate to violations")

    for name in ("companion", "decompose", "check"):
        p = sub.add_parser(name, parents=[common], help=f"{name} of a run-length sequence")
        p.add_argument("--seq", required=True)
        if name != "check":
            p.add_argument("--family", choices=[f.value for f in Family], default=Family.M01.value)

    return parser.parse_args(argv)


def emit(result: CommandResult, output: str, stream=None) -> None:
    stream = stream or sys.stdout
    if output == "json":
        stream.write(json.dumps(result.record, indent=2) + "\n")
    elif output == "csv":
        rows = result.rows if result.rows is not None else [flatten(result.record)]
        fields: List[str] = []
        for row in rows:
            fields.extend(k for k in row if k not in fields)
        writer = csv.DictWriter(stream, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        stream.write("\n".join(text_lines(result.record)) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = CliConfig(args.precision, args.qmax, args.cap, args.output, args.record)
    except ValueError as exc:
        print(f"[MARKOFF ERROR] {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        result = COMMANDS[args.command](args, cfg)
    except ParseError as exc:
        print(f"[MARKOFF ERROR] {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"[MARKOFF ERROR] {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except CertificateError as exc:
        print(f"[MARKOFF ERROR] internal cross-check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except InconclusiveError as exc:
        print(f"[MARKOFF INCONCLUSIVE] {exc}", file=sys.stderr)
        partial = partial_record(exc.partial, cfg.precision)
        if partial is not None:
            emit(CommandResult(args.command, partial), cfg.output)
        return EXIT_INCONCLUSIVE

    emit(result, cfg.output)
    if cfg.record:
        outcome = CertificateLedger().add_record(result.kind, result.record)
        if not outcome["ok"]:
            print(f"[MARKOFF ERROR] ledger write failed: {outcome['error']}", file=sys.stderr)
    logger.debug("%s finished", args.command)
    if not result.passed:
        print(f"[MARKOFF ERROR] {args.command} found counterexamples", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
