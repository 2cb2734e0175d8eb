"""Run configuration: one JSON file plus ISA_-prefixed environment overrides.

Example:

    {
      "paths": {
        "models": {"application": "models/application.model"},
        "reputation_db": "reputation.csv",
        "hash_list": null,
        "trust_store": "trust.txt",
        "version_table": "versions.csv",
        "question_map": null,
        "ip_user_map": "ipmap.csv",
        "package_categories": null,
        "dangerous_permissions": null
      },
      "params": {
        "beta": 0.5,
        "correlation_window": 60,
        "burst_min": 10,
        "burst_window": 86400,
        "quiet_gap": 604800,
        "recurrence_days": 3,
        "malformed_threshold": 0.1
      },
      "remote": {"enabled": false, "endpoint": null, "api_key": null},
      "output_dir": "out"
    }

Null paths fall back to packaged defaults where one exists.  Environment
variables override parameters: ``ISA_BETA``, ``ISA_CORRELATION_WINDOW``,
``ISA_BURST_MIN``, ``ISA_BURST_WINDOW``, ``ISA_QUIET_GAP``,
``ISA_RECURRENCE_DAYS``, ``ISA_MALFORMED_THRESHOLD``, ``ISA_OUTPUT_DIR``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .reputation import RemoteConfig

_DEFAULT_PARAMS = {
    "beta": 0.5,
    "correlation_window": 60.0,
    "burst_min": 10,
    "burst_window": 86400.0,
    "quiet_gap": 604800.0,
    "recurrence_days": 3,
    "malformed_threshold": 0.10,
}

_PARAM_BOUNDS = {
    "beta": (0.0, None),
    "correlation_window": (0.0, None),
    "burst_min": (1, None),
    "burst_window": (1.0, None),
    "quiet_gap": (1.0, None),
    "recurrence_days": (1, None),
    "malformed_threshold": (0.0, 1.0),
}

_PATH_KEYS = (
    "reputation_db", "hash_list", "trust_store", "version_table",
    "question_map", "ip_user_map", "package_categories", "dangerous_permissions",
)


@dataclass
class RunConfig:
    models: dict[str, str] = field(default_factory=dict)
    paths: dict[str, str | None] = field(default_factory=dict)
    params: dict[str, float] = field(default_factory=lambda: dict(_DEFAULT_PARAMS))
    remote: RemoteConfig = field(default_factory=RemoteConfig)
    output_dir: str = "out"

    def path(self, key: str) -> str | None:
        return self.paths.get(key)

    def require_path(self, key: str) -> str:
        value = self.paths.get(key)
        if not value:
            raise ConfigError(f"config is missing required path {key!r}")
        return value

    def model_path(self, attack_class: str) -> str:
        try:
            return self.models[attack_class]
        except KeyError:
            raise ConfigError(f"config defines no model for class {attack_class!r}") from None


def _apply_env(params: dict, output_dir: str) -> tuple[dict, str]:
    for key in list(params):
        env = os.environ.get(f"ISA_{key.upper()}")
        if env is not None:
            try:
                params[key] = type(_DEFAULT_PARAMS[key])(float(env))
            except ValueError:
                raise ConfigError(f"bad value for ISA_{key.upper()}: {env!r}") from None
    return params, os.environ.get("ISA_OUTPUT_DIR", output_dir)


def load_config(path=None) -> RunConfig:
    """Load and validate a run configuration (defaults when path is None)."""
    obj = {}
    base = Path(".")
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            obj = json.loads(p.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
        base = p.parent

    raw_paths = obj.get("paths", {})
    models = raw_paths.get("models", {}) or {}
    paths: dict[str, str | None] = {}
    for key in _PATH_KEYS:
        value = raw_paths.get(key)
        paths[key] = str(base / value) if value else None
    models = {ac: str(base / mp) for ac, mp in models.items()}

    params = dict(_DEFAULT_PARAMS)
    for key, value in obj.get("params", {}).items():
        if key not in _DEFAULT_PARAMS:
            raise ConfigError(f"unknown parameter {key!r}")
        params[key] = type(_DEFAULT_PARAMS[key])(value)
    params, output_dir = _apply_env(params, obj.get("output_dir", "out"))

    for key, (lo, hi) in _PARAM_BOUNDS.items():
        v = params[key]
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            raise ConfigError(f"parameter {key}={v} outside documented range")

    remote_obj = obj.get("remote", {})
    remote = RemoteConfig(
        enabled=bool(remote_obj.get("enabled", False)),
        endpoint=remote_obj.get("endpoint"),
        api_key=remote_obj.get("api_key"),
        timeout=float(remote_obj.get("timeout", 5.0)),
        min_interval=float(remote_obj.get("min_interval", 0.0)),
    )

    config = RunConfig(models=models, paths=paths, params=params,
                       remote=remote, output_dir=output_dir)
    for key, value in {**{k: v for k, v in config.paths.items()}, **config.models}.items():
        if value and not Path(value).exists():
            raise ConfigError(f"configured file does not exist: {key} -> {value}")
    return config
