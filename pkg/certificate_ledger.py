"""
certificate_ledger.py
---------------------

Append-only ledger of the results emitted by the MarkoffLab front ends.
Every entry is one JSON line carrying a timestamp, the command kind, the
emitted record and a SHA-256 digest of the record's canonical JSON. The
digest lets :meth:`CertificateLedger.verify` flag entries that were edited
after the fact.

The default ledger lives under ``<MARKOFF_DATA>/ledger/certificates.jsonl``
and is created the first time something is written. Reads never raise:
unreadable files and malformed lines are skipped.
"""

from __future__ import annotations

import hashlib
import json
import logging
import pathlib
import time
from typing import Any, Dict, List

from config import Config

logger = logging.getLogger(__name__)


def default_path() -> pathlib.Path:
    return pathlib.Path(Config.DATA_DIR) / "ledger" / "certificates.jsonl"


def canonical_json(record: Any) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(record: Any) -> str:
    return hashlib.sha256(canonical_json(record).encode("utf-8")).hexdigest()


class CertificateLedger:
    """Append-only JSON-lines store of emitted records.

    Attributes
    ----------
    path : pathlib.Path
        The file where entries are recorded, one JSON object per line.
    """

    def __init__(self, path: pathlib.Path | str | None = None) -> None:
        self.path = pathlib.Path(path) if path is not None else default_path()

    def add_record(self, kind: str, record: Dict[str, Any]) -> Dict[str, Any]:
        """Append a record to the ledger.

        Parameters
        ----------
        kind : str
            The command that produced the record, e.g. ``"phi"``.
        record : dict
            The JSON-serialisable record as printed by the front end.

        Returns
        -------
        dict
            ``{"ok": True, "entry": ...}`` on success, otherwise
            ``{"ok": False, "error": ...}``.
        """
        if not kind:
            return {"ok": False, "error": "empty kind"}
        try:
            entry = {"ts": time.time(), "kind": kind, "record": record, "sha256": digest(record)}
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as f:
                f.write(json.dumps(entry, ensure_ascii=False) + "\n")
        except (OSError, TypeError, ValueError) as e:
            logger.warning("could not record %s entry in %s: %s", kind, self.path, e)
            return {"ok": False, "error": str(e)}
        return {"ok": True, "entry": entry}

    def _load(self) -> List[Dict[str, Any]]:
        out: List[Dict[str, Any]] = []
        try:
            with self.path.open("r", encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rec = json.loads(line)
                    except json.JSONDecodeError:
                        continue
                    if isinstance(rec, dict) and "record" in rec:
                        out.append(rec)
        except OSError:
            pass
        return out

    def recent(self, limit: int = 25) -> List[Dict[str, Any]]:
        """Return at most ``limit`` entries, newest first."""
        if limit < 1:
            return []
        return list(reversed(self._load()[-limit:]))

    def verify(self) -> List[Dict[str, Any]]:
        """Entries whose stored digest no longer matches their record."""
        return [e for e in self._load() if e.get("sha256") != digest(e.get("record"))]


__all__ = ["CertificateLedger", "canonical_json", "default_path", "digest"]
