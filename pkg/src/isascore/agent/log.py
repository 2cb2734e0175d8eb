"""Agent event log ingestion.

The log is JSON Lines, one event per line:

    {"uid": "u0001", "ts": 1600000000, "kind": "wifi_change", "payload": {...}}

Payload schemas by kind (all fields required unless marked nullable):

- ``wifi_change``: ssid (nullable; null = disconnected), bssid (nullable),
  security in {open, wep, wpa, wpa2, wpa3} (nullable when disconnected)
- ``bluetooth_change``: bluetooth_on, nfc_on, gps_on (bools),
  connected_devices (int)
- ``traffic_stat``: package, rx_bytes, tx_bytes
- ``installed_apps``: apps = list of app records (see ``burst.AppRecord``)
- ``running_apps``: packages = list of package names
- ``app_change``: action in {install, update, delete}, package
- ``browser_visit``: url, domain, scheme in {http, https},
  untrusted_cert (bool), is_download (bool), sent_private_data (bool)
- ``email_stats``: received, sent, spam_received, spam_opened (ints,
  deltas for the reporting period)
- ``sms``: sender, known_sender (bool), links (list of URLs),
  auth_code (bool)
- ``hardware``: model, brand
- ``software``: os_version, build
- ``root_check``: rooted (bool)
- ``screen_lock``: type in {none, swipe, pin, pattern, password, fingerprint}

Lines that fail validation (bad JSON, unknown kind, incomplete payload) are
skipped and counted; a file whose malformed fraction exceeds the threshold
is rejected outright.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import InputError

logger = logging.getLogger(__name__)

WIFI_SECURITY = {"open", "wep", "wpa", "wpa2", "wpa3"}
APP_SOURCES = {"official-store", "unofficial", "sideload-unknown"}
APP_ACTIONS = {"install", "update", "delete"}
LOCK_TYPES = {"none", "swipe", "pin", "pattern", "password", "fingerprint"}
SECURE_LOCK_TYPES = {"pin", "pattern", "password", "fingerprint"}

# required payload keys per kind; value checks happen in _validate_payload
EVENT_KINDS: dict[str, tuple[str, ...]] = {
    "wifi_change": ("ssid", "bssid", "security"),
    "bluetooth_change": ("bluetooth_on", "nfc_on", "gps_on", "connected_devices"),
    "traffic_stat": ("package", "rx_bytes", "tx_bytes"),
    "installed_apps": ("apps",),
    "running_apps": ("packages",),
    "app_change": ("action", "package"),
    "browser_visit": ("url", "domain", "scheme", "untrusted_cert", "is_download",
                      "sent_private_data"),
    "email_stats": ("received", "sent", "spam_received", "spam_opened"),
    "sms": ("sender", "known_sender", "links", "auth_code"),
    "hardware": ("model", "brand"),
    "software": ("os_version", "build"),
    "root_check": ("rooted",),
    "screen_lock": ("type",),
}

_APP_FIELDS = ("package", "install_time", "source", "permissions",
               "rating", "downloads", "requires_root", "av_flagged", "up_to_date")


@dataclass(frozen=True)
class AgentEvent:
    user_id: str
    timestamp: float
    kind: str
    payload: dict


@dataclass
class AgentLog:
    """Parsed event log: per-user time-sorted streams plus parse accounting."""

    streams: dict[str, list[AgentEvent]]
    total_lines: int
    skipped: int
    kind_counts: Counter = field(default_factory=Counter)

    @property
    def users(self) -> list[str]:
        return sorted(self.streams)


def _bad(reason):
    raise ValueError(reason)


def _validate_payload(kind: str, payload: dict) -> None:
    for key in EVENT_KINDS[kind]:
        if key not in payload:
            _bad(f"payload missing {key!r}")
    if kind == "wifi_change":
        sec = payload["security"]
        if sec is not None and sec not in WIFI_SECURITY:
            _bad(f"bad wifi security {sec!r}")
    elif kind == "bluetooth_change":
        if not isinstance(payload["connected_devices"], int) or payload["connected_devices"] < 0:
            _bad("connected_devices must be a nonnegative int")
    elif kind == "installed_apps":
        if not isinstance(payload["apps"], list):
            _bad("apps must be a list")
        for app in payload["apps"]:
            for key in _APP_FIELDS:
                if key not in app:
                    _bad(f"app record missing {key!r}")
            if app["source"] not in APP_SOURCES:
                _bad(f"bad app source {app['source']!r}")
            rating = app["rating"]
            if rating is not None and not 0 <= rating <= 5:
                _bad(f"rating out of range: {rating}")
    elif kind == "app_change":
        if payload["action"] not in APP_ACTIONS:
            _bad(f"bad app action {payload['action']!r}")
    elif kind == "browser_visit":
        if payload["scheme"] not in ("http", "https"):
            _bad(f"bad scheme {payload['scheme']!r}")
    elif kind == "sms":
        if not isinstance(payload["links"], list):
            _bad("links must be a list")
    elif kind == "screen_lock":
        if payload["type"] not in LOCK_TYPES:
            _bad(f"bad lock type {payload['type']!r}")


def parse_event_log(path, malformed_threshold: float = 0.10) -> AgentLog:
    """Read a JSON Lines agent log into per-user, time-sorted event streams.

    Malformed lines are skipped and counted; if they exceed
    ``malformed_threshold`` of all nonempty lines the whole file is rejected.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read agent log {path}: {exc}") from exc

    streams: dict[str, list[AgentEvent]] = {}
    kind_counts: Counter = Counter()
    skipped = 0
    total = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        total += 1
        try:
            obj = json.loads(line)
            uid = obj["uid"]
            ts = float(obj["ts"])
            kind = obj["kind"]
            payload = obj["payload"]
            if not isinstance(uid, str) or not uid:
                _bad("uid must be a nonempty string")
            if ts <= 0:
                _bad("ts must be positive")
            if kind not in EVENT_KINDS:
                _bad(f"unknown kind {kind!r}")
            if not isinstance(payload, dict):
                _bad("payload must be an object")
            _validate_payload(kind, payload)
        except (ValueError, KeyError, TypeError) as exc:
            logger.debug("skipping line %d: %s", lineno, exc)
            skipped += 1
            continue
        streams.setdefault(uid, []).append(AgentEvent(uid, ts, kind, payload))
        kind_counts[kind] += 1

    if total and skipped / total > malformed_threshold:
        raise InputError(
            f"{path}: {skipped} of {total} lines malformed "
            f"(over the {malformed_threshold:.0%} threshold)"
        )
    for events in streams.values():
        events.sort(key=lambda e: e.timestamp)
    return AgentLog(streams=streams, total_lines=total, skipped=skipped,
                    kind_counts=kind_counts)
