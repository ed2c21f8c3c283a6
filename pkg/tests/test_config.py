import json

import pytest

from netswitch.core.errors import ParseError
from netswitch.utils import config


def test_defaults():
    assert config.get_setting("tol_eig") == 1e-8
    assert config.get_setting("lp_backend") == "auto"
    assert config.resolve("restarts") == 8
    assert config.resolve("restarts", 3) == 3
    with pytest.raises(KeyError):
        config.get_setting("colour")


def test_set_setting_checks_types():
    config.set_setting("threads", 4.0)
    assert config.get_setting("threads") == 4
    config.set_setting("tol_comm", 1)
    assert config.get_setting("tol_comm") == 1.0
    config.set_setting("log_level", "debug")
    assert config.get_setting("log_level") == "DEBUG"

    with pytest.raises(ParseError):
        config.set_setting("threads", "many")
    with pytest.raises(ParseError):
        config.set_setting("tol_eig", -1.0)
    with pytest.raises(ParseError):
        config.set_setting("lp_backend", "cplex")
    with pytest.raises(ParseError):
        config.set_setting("restarts", True)
    with pytest.raises(ParseError):
        config.set_setting("unknown", 1)


def test_threads_environment(monkeypatch):
    monkeypatch.setenv(config.THREADS_ENV, "6")
    assert config.get_setting("threads") == 6
    monkeypatch.setenv(config.THREADS_ENV, "0")
    assert config.get_setting("threads") == 1
    monkeypatch.setenv(config.THREADS_ENV, "lots")
    assert config.get_setting("threads") == 1


def test_update_skips_unknown_keys():
    config.update_settings({"restarts": 2, "palette": "dark"})
    assert config.get_setting("restarts") == 2
    assert "palette" not in config.current_settings()


def test_save_and_load_round_trip(tmp_path):
    path = str(tmp_path / ".netswitch" / "settings.json")
    config.set_setting("subsamples", 7)
    assert config.save_settings(path) == path

    config.reset_settings()
    assert config.get_setting("subsamples") == 20
    assert config.load_settings(path)
    assert config.get_setting("subsamples") == 7


def test_load_default_location(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert not config.load_settings()

    (tmp_path / ".netswitch").mkdir()
    (tmp_path / ".netswitch" / "settings.json").write_text(json.dumps({"max_iter": 12}))
    assert config.load_settings()
    assert config.get_setting("max_iter") == 12


def test_load_rejects_bad_files(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{\n  "restarts": ,\n}')
    with pytest.raises(ParseError) as info:
        config.load_settings(str(broken))
    assert info.value.line == 2

    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    with pytest.raises(ParseError):
        config.load_settings(str(listed))

    typed = tmp_path / "typed.json"
    typed.write_text('{"restarts": "eight"}')
    with pytest.raises(ParseError) as info:
        config.load_settings(str(typed))
    assert str(typed) in str(info.value)
