import json

import config
from config import Config, SETTINGS_KEYS, _load_user_settings, settings_path


def test_defaults():
    # Default port should be 5000 if not overridden
    assert Config.PORT == 5000
    # Host should be defined and non-empty
    assert Config.HOST
    assert Config.QMAX >= 1
    assert Config.BRUTE_FORCE_CAP >= 1
    assert Config.OUTPUT in ("json", "csv", "text")
    assert Config.QMAX <= Config.MAX_QMAX
    assert Config.MARKOFF_CAP <= Config.MAX_BOUND
    assert "MARKOFF_MAX_SCAN" in SETTINGS_KEYS


def test_settings_path_is_outside_the_repo():
    path = settings_path()
    assert path.name == "settings.json"
    assert path.parent.name.lower() == "markofflab"


def test_missing_settings_file(tmp_path):
    assert _load_user_settings(tmp_path / "absent.json") is False


def test_settings_fill_only_unset_keys(tmp_path, monkeypatch):
    monkeypatch.setenv("MARKOFF_QMAX", "")
    monkeypatch.setenv("MARKOFF_PRECISION", "7")
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"MARKOFF_QMAX": 20000, "MARKOFF_PRECISION": 30, "UNRELATED": 1}), encoding="utf-8")
    assert _load_user_settings(path) is True
    assert config.os.environ["MARKOFF_QMAX"] == "20000"
    assert config.os.environ["MARKOFF_PRECISION"] == "7"
    assert "UNRELATED" not in config.os.environ
    assert "UNRELATED" not in SETTINGS_KEYS


def test_unreadable_settings_are_ignored(tmp_path, capsys):
    path = tmp_path / "settings.json"
    path.write_text("{not json", encoding="utf-8")
    assert _load_user_settings(path) is False
    assert "[MARKOFF CONFIG]" in capsys.readouterr().out
