import json

import pytest

from isascore.config import load_config
from isascore.errors import ConfigError


def write_config(tmp_path, obj):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(obj))
    return path


def test_defaults_without_file():
    config = load_config()
    assert config.params["beta"] == 0.5
    assert config.params["correlation_window"] == 60.0
    assert config.params["burst_min"] == 10
    assert config.remote.enabled is False


def test_paths_resolved_relative_to_config(tmp_path):
    (tmp_path / "rep.csv").write_text("x.example,malware,\n")
    path = write_config(tmp_path, {"paths": {"reputation_db": "rep.csv"}})
    config = load_config(path)
    assert config.path("reputation_db") == str(tmp_path / "rep.csv")


def test_missing_referenced_file_rejected(tmp_path):
    path = write_config(tmp_path, {"paths": {"reputation_db": "absent.csv"}})
    with pytest.raises(ConfigError, match="does not exist"):
        load_config(path)


def test_unknown_parameter_rejected(tmp_path):
    path = write_config(tmp_path, {"params": {"gamma": 1}})
    with pytest.raises(ConfigError, match="unknown parameter"):
        load_config(path)


def test_out_of_range_parameter_rejected(tmp_path):
    path = write_config(tmp_path, {"params": {"beta": -1}})
    with pytest.raises(ConfigError, match="outside documented range"):
        load_config(path)


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("ISA_BETA", "1.25")
    monkeypatch.setenv("ISA_RECURRENCE_DAYS", "5")
    monkeypatch.setenv("ISA_OUTPUT_DIR", "elsewhere")
    config = load_config()
    assert config.params["beta"] == 1.25
    assert config.params["recurrence_days"] == 5
    assert isinstance(config.params["recurrence_days"], int)
    assert config.output_dir == "elsewhere"


def test_env_override_bad_value(monkeypatch):
    monkeypatch.setenv("ISA_BETA", "lots")
    with pytest.raises(ConfigError, match="ISA_BETA"):
        load_config()


def test_invalid_json_rejected(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{nope")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(path)


def test_require_path_message():
    config = load_config()
    with pytest.raises(ConfigError, match="trust_store"):
        config.require_path("trust_store")
