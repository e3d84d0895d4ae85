import logging
import time
from typing import Any, Dict, Optional

from flask import Flask, jsonify, request

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
    form_report,
    parse_seq,
    parse_theta,
    partial_record,
    root_report_record,
    tree_report,
    value_record,
)
from markoff import markoff_triple_for
from seqlab import Family, classify_theta, companion, decompose

logger = logging.getLogger("markofflab.app")


def _int_arg(name: str, default: Optional[int] = None, maximum: Optional[int] = None) -> int:
    raw = request.args.get(name)
    if raw is None:
        if default is None:
            raise ParseError(f"missing query parameter {name!r}")
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ParseError(f"query parameter {name!r} must be an integer, got {raw!r}") from exc
    if maximum is not None and value > maximum:
        raise ParseError(f"query parameter {name!r} must be at most {maximum}, got {value}")
    return value


def _str_arg(name: str) -> str:
    raw = request.args.get(name, "").strip()
    if not raw:
        raise ParseError(f"missing query parameter {name!r}")
    return raw


def _family_arg() -> Family:
    raw = request.args.get("family", Family.M01.value)
    try:
        return Family(raw)
    except ValueError as exc:
        raise ParseError(f"family must be M01 or M10, got {raw!r}") from exc


def create_app(ledger: Optional[CertificateLedger] = None) -> Flask:
    """Build the JSON API. Every route mirrors one CLI subcommand."""
    app = Flask(__name__)
    store = ledger or CertificateLedger()
    precision = Config.PRECISION

    def _respond(kind: str, record: Dict[str, Any]):
        if request.args.get("record", "").lower() in ("1", "true", "yes"):
            store.add_record(kind, record)
        return jsonify(record)

    # ─── ERRORS ──────────────────────────────────────────────────────────
    @app.errorhandler(ParseError)
    @app.errorhandler(DomainError)
    def _bad_input(exc: ValueError):
        return jsonify({"status": "error", "message": str(exc)}), 400

    @app.errorhandler(CertificateError)
    def _cross_check_failed(exc: CertificateError):
        logger.error("internal cross-check failed: %s", exc)
        return jsonify({"status": "error", "message": f"internal cross-check failed: {exc}"}), 500

    @app.errorhandler(InconclusiveError)
    def _inconclusive(exc: InconclusiveError):
        return jsonify({
            "status": "inconclusive",
            "message": str(exc),
            "partial": partial_record(exc.partial, precision),
        }), 422

    # ─── ROUTES ──────────────────────────────────────────────────────────
    @app.get("/health")
    def health():
        return jsonify({
            "server": "ok",
            "qmax": Config.QMAX,
            "markoff_cap": Config.MARKOFF_CAP,
            "ledger": str(store.path),
        })

    @app.get("/api/tree")
    def api_tree():
        bound = _int_arg("bound", maximum=Config.MAX_BOUND)
        if bound < 1:
            raise ParseError("bound must be a positive integer")
        return _respond("tree", tree_report(bound))

    @app.get("/api/form")
    def api_form():
        m = _int_arg("m")
        cap = _int_arg("cap", Config.MARKOFF_CAP, maximum=Config.MAX_BOUND)
        return _respond("form", form_report(m, cap, Config.COORD_SLACK, precision))

    @app.get("/api/expand")
    def api_expand():
        theta = parse_theta(_str_arg("theta"))
        return _respond("expand", {
            "theta": str(theta),
            "decimal": to_decimal(theta, precision),
            "expansion": str(cf_expand(theta)),
        })

    @app.get("/api/phi")
    def api_phi():
        theta = parse_theta(_str_arg("theta"))
        qmax = _int_arg("qmax", Config.QMAX, maximum=Config.MAX_QMAX)
        if qmax < 1:
            raise ParseError("qmax must be a positive integer")
        started = time.monotonic()
        cert = phi_certified(cf_expand(theta), qmax, Config.BRUTE_FORCE_CAP)
        logger.info("phi of %s certified in %.2fs", theta, time.monotonic() - started)
        return _respond("phi", certificate_record(cert, precision))

    @app.get("/api/value")
    def api_value():
        theta = parse_theta(_str_arg("theta"))
        value = markoff_value(cf_expand(theta))
        return _respond("value", {
            "theta": str(cf_expand(theta)),
            "value": value_record(value, precision),
            "exceeds_third": value * 3 > 1,
        })

    @app.get("/api/verify")
    def api_verify():
        m = _int_arg("m")
        qmax = _int_arg("qmax", Config.QMAX, maximum=Config.MAX_SCAN)
        markoff_triple_for(m, Config.MARKOFF_CAP)
        return _respond("verify", root_report_record(verify_markoff_roots(m, qmax), precision))

    @app.get("/api/classify")
    def api_classify():
        theta = parse_theta(_str_arg("theta"))
        cap = _int_arg("cap", Config.MARKOFF_CAP, maximum=Config.MAX_BOUND)
        qmax = _int_arg("qmax", Config.QMAX, maximum=Config.MAX_QMAX)
        result = classify_theta(theta, cap, qmax)
        return _respond("classify", classification_record(result, precision))

    @app.get("/api/companion")
    def api_companion():
        s = parse_seq(_str_arg("seq"))
        family = _family_arg()
        return _respond("companion", {
            "seq": str(s),
            "family": family.value,
            "companion": str(companion(s, family)),
        })

    @app.get("/api/decompose")
    def api_decompose():
        s = parse_seq(_str_arg("seq"))
        return _respond("decompose", {"seq": str(s), **decomposition_record(decompose(s, _family_arg()))})

    @app.get("/api/ledger/recent")
    def api_ledger_recent():
        """Return the newest ledger entries.

        Query parameter:
          - ``limit`` (int): maximum number of entries to return (default 25).
        """
        try:
            limit = int(request.args.get("limit", "25"))
        except ValueError:
            limit = 25
        return jsonify({"items": store.recent(limit)})

    return app


app = create_app()

if __name__ == "__main__":
    logging.basicConfig(level=getattr(logging, Config.LOG_LEVEL.upper(), logging.WARNING))
    print(f"🚀 Starting MarkoffLab API at {time.strftime('%Y-%m-%d %H:%M:%S')} on {Config.HOST}:{Config.PORT}...")
    app.run(host=Config.HOST, port=Config.PORT)
