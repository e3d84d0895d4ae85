"""Pytest configuration helpers for the MarkoffLab test suite."""

import sys
from pathlib import Path

import pytest
from dotenv import load_dotenv

# Ensure the project root is importable when invoking ``pytest`` directly.
ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

# Honour a local .env the same way the front ends do, without overriding
# anything already set in the environment.
dotenv_path = ROOT / ".env"
if dotenv_path.exists():
    load_dotenv(dotenv_path, override=False)


@pytest.fixture
def ledger(tmp_path):
    from certificate_ledger import CertificateLedger

    return CertificateLedger(tmp_path / "ledger" / "certificates.jsonl")


@pytest.fixture
def client(ledger):
    from app import create_app

    app = create_app(ledger)
    app.config.update(TESTING=True)
    return app.test_client()
