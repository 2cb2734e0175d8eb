import json
import random

import pytest

from isascore.agent import parse_event_log
from isascore.errors import InputError


def ev(uid, ts, kind, payload):
    return json.dumps({"uid": uid, "ts": ts, "kind": kind, "payload": payload})


def wifi(ssid="cafe", security="open"):
    return {"ssid": ssid, "bssid": "aa:bb:cc:dd:ee:ff", "security": security}


def write_log(tmp_path, lines):
    path = tmp_path / "events.jsonl"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_groups_by_user_and_sorts_by_time(tmp_path):
    lines = [
        ev("u2", 300, "wifi_change", wifi()),
        ev("u1", 200, "wifi_change", wifi()),
        ev("u1", 100, "root_check", {"rooted": False}),
    ]
    log = parse_event_log(write_log(tmp_path, lines))
    assert log.users == ["u1", "u2"]
    assert [e.timestamp for e in log.streams["u1"]] == [100, 200]
    assert log.skipped == 0


def test_unknown_kind_skipped_and_counted(tmp_path):
    lines = [ev("u1", 100 + i, "wifi_change", wifi()) for i in range(10)]
    lines.append(ev("u1", 111, "teleport", {}))
    log = parse_event_log(write_log(tmp_path, lines))
    assert log.skipped == 1
    assert len(log.streams["u1"]) == 10


def test_incomplete_payload_skipped(tmp_path):
    lines = [ev("u1", 100, "wifi_change", {"ssid": "x"})]
    log = parse_event_log(write_log(tmp_path, lines), malformed_threshold=1.0)
    assert log.skipped == 1
    assert log.streams == {}


def test_nonpositive_timestamp_skipped(tmp_path):
    lines = [ev("u1", 0, "root_check", {"rooted": True}),
             ev("u1", 5, "root_check", {"rooted": True})]
    log = parse_event_log(write_log(tmp_path, lines), malformed_threshold=0.6)
    assert log.skipped == 1


def test_over_threshold_malformed_rejected(tmp_path):
    lines = [ev("u1", 100, "wifi_change", wifi())] + ["{broken"] * 2
    with pytest.raises(InputError, match="malformed"):
        parse_event_log(write_log(tmp_path, lines))


def test_unreadable_file_rejected(tmp_path):
    with pytest.raises(InputError, match="cannot read"):
        parse_event_log(tmp_path / "missing.jsonl")


def test_thousand_line_fixture_counts_match_manifest(tmp_path):
    rng = random.Random(7)
    kinds = {
        "wifi_change": lambda: wifi(),
        "root_check": lambda: {"rooted": rng.random() < 0.5},
        "screen_lock": lambda: {"type": "pin"},
        "email_stats": lambda: {"received": 1, "sent": 0,
                                "spam_received": 0, "spam_opened": 0},
        "app_change": lambda: {"action": "delete", "package": "com.x"},
    }
    manifest = {k: 0 for k in kinds}
    lines = []
    for i in range(1000):
        kind = rng.choice(sorted(kinds))
        manifest[kind] += 1
        lines.append(ev(f"u{i % 17}", 1000 + i, kind, kinds[kind]()))
    log = parse_event_log(write_log(tmp_path, lines))
    assert log.skipped == 0
    assert dict(log.kind_counts) == manifest
    assert sum(len(s) for s in log.streams.values()) == 1000
    assert len(log.streams) == 17
