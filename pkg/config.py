import json
import os
import pathlib
from dataclasses import dataclass

"""
Central configuration loader for MarkoffLab.

Values are read from these sources, in order of precedence:

1. Process environment variables (highest priority)
2. A local `.env` file found by python-dotenv
3. A user-level settings file stored outside the repository

The user-level file lives in `%APPDATA%/MarkoffLab/settings.json` on Windows
or `~/.config/markofflab/settings.json` on Linux/macOS. It holds JSON such as
`{"MARKOFF_QMAX": 20000}` and only fills keys that the environment leaves unset.
"""

SETTINGS_KEYS = (
    "HOST",
    "PORT",
    "MARKOFF_QMAX",
    "MARKOFF_CAP",
    "MARKOFF_PRECISION",
    "MARKOFF_OUTPUT",
    "MARKOFF_BRUTE_FORCE_CAP",
    "MARKOFF_TRIPLE_ORACLE_CAP",
    "MARKOFF_COORD_SLACK",
    "MARKOFF_MAX_BOUND",
    "MARKOFF_MAX_QMAX",
    "MARKOFF_MAX_SCAN",
    "MARKOFF_DATA",
    "MARKOFF_LOG_LEVEL",
)


def _load_dotenv() -> None:
    from dotenv import find_dotenv, load_dotenv

    load_dotenv(find_dotenv(usecwd=True))


def settings_path() -> pathlib.Path:
    if os.name == "nt":
        appdata = os.environ.get("APPDATA") or str(pathlib.Path.home() / "AppData/Roaming")
        return pathlib.Path(appdata) / "MarkoffLab" / "settings.json"
    return pathlib.Path.home() / ".config" / "markofflab" / "settings.json"


def _load_user_settings(path: pathlib.Path | None = None) -> bool:
    """Fill unset environment keys from the user settings file.

    Returns True if a settings file was found and processed.
    """
    path = path or settings_path()
    if not path.exists():
        return False
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"[MARKOFF CONFIG] ignoring unreadable settings file {path}: {exc}")
        return False
    for key in SETTINGS_KEYS:
        val = data.get(key)
        if val is not None and not os.environ.get(key):
            os.environ[key] = str(val)
    return True


# Load .env and then the user settings on module import
_load_dotenv()
_load_user_settings()


@dataclass
class Config:
    """Central configuration loaded from environment variables and defaults."""

    # HTTP server
    HOST: str = os.getenv("HOST", "0.0.0.0")
    PORT: int = int(os.getenv("PORT", "5000"))

    # Certification budgets
    QMAX: int = int(os.getenv("MARKOFF_QMAX", "10000"))
    MARKOFF_CAP: int = int(os.getenv("MARKOFF_CAP", "1000000"))
    BRUTE_FORCE_CAP: int = int(os.getenv("MARKOFF_BRUTE_FORCE_CAP", "10000"))
    TRIPLE_ORACLE_CAP: int = int(os.getenv("MARKOFF_TRIPLE_ORACLE_CAP", "10000"))
    COORD_SLACK: int = int(os.getenv("MARKOFF_COORD_SLACK", "16"))

    # Request limits for the front ends; MAX_SCAN caps the q-by-q scan of verify
    MAX_BOUND: int = int(os.getenv("MARKOFF_MAX_BOUND", "1000000000"))
    MAX_QMAX: int = int(os.getenv("MARKOFF_MAX_QMAX", "1000000000000"))
    MAX_SCAN: int = int(os.getenv("MARKOFF_MAX_SCAN", "1000000"))

    # Output
    PRECISION: int = int(os.getenv("MARKOFF_PRECISION", "12"))
    OUTPUT: str = os.getenv("MARKOFF_OUTPUT", "json")

    # Certificate ledger and logging
    DATA_DIR: str = os.getenv("MARKOFF_DATA", ".")
    LOG_LEVEL: str = os.getenv("MARKOFF_LOG_LEVEL", "WARNING")
