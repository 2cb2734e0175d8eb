"""Criterion measurement from agent event streams.

Each measure function returns a dict of raw values for the criteria it could
actually measure; criteria whose source events are absent are simply left
out and end up excluded from the user's coverage set.  All raw values are
nonnegative counts, fractions, or 0/1 indicators.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import InputError
from ..reputation import MALICIOUS_CATEGORIES, ReputationDb
from ..versions import VersionTable
from .burst import (
    DEFAULT_BURST_MIN,
    DEFAULT_BURST_WINDOW,
    DEFAULT_QUIET_GAP,
    AppRecord,
    split_system_apps,
)
from .log import SECURE_LOCK_TYPES, AgentEvent

LOW_RATING_THRESHOLD = 3.5  # strict less-than

PACKAGE_CATEGORY_NAMES = frozenset({"antivirus", "password-manager", "vpn"})


@dataclass(frozen=True)
class PackageCategories:
    """Longest-prefix classifier mapping package names to security categories."""

    prefixes: tuple[tuple[str, str], ...]  # (prefix, category), longest first

    def classify(self, package: str) -> str | None:
        for prefix, category in self.prefixes:
            if package.startswith(prefix):
                return category
        return None


def load_package_categories(path=None) -> PackageCategories:
    """CSV ``package_prefix,category``; defaults to the shipped list."""
    if path is None:
        with resources.files("isascore.data").joinpath("package_categories.csv").open() as fh:
            rows = list(csv.reader(fh))
    else:
        p = Path(path)
        if not p.exists():
            raise InputError(f"package category list not found: {p}")
        with open(p, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    pairs = []
    for lineno, row in enumerate(rows, 1):
        if not row or row[0].strip().startswith("#"):
            continue
        if len(row) != 2:
            raise InputError(f"package categories line {lineno}: expected 'prefix,category'")
        prefix, category = row[0].strip(), row[1].strip()
        if category not in PACKAGE_CATEGORY_NAMES:
            raise InputError(f"package categories line {lineno}: unknown category {category!r}")
        pairs.append((prefix, category))
    pairs.sort(key=lambda p: len(p[0]), reverse=True)
    return PackageCategories(tuple(pairs))


def load_dangerous_permissions(path=None) -> frozenset[str]:
    """One permission name per line; defaults to the shipped platform list."""
    if path is None:
        text = resources.files("isascore.data").joinpath("dangerous_permissions.txt").read_text()
    else:
        p = Path(path)
        if not p.exists():
            raise InputError(f"dangerous permission list not found: {p}")
        text = p.read_text(encoding="utf-8")
    perms = {ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")}
    return frozenset(perms)


def _latest(events: list[AgentEvent], kind: str) -> AgentEvent | None:
    found = None
    for ev in events:
        if ev.kind == kind:
            found = ev
    return found


def measure_application_criteria(
    events: list[AgentEvent],
    packages: PackageCategories,
    dangerous_permissions: frozenset[str],
    burst_min: int = DEFAULT_BURST_MIN,
    burst_window: float = DEFAULT_BURST_WINDOW,
    quiet_gap: float = DEFAULT_QUIET_GAP,
) -> dict[str, float]:
    """AI1-AI4, AH1, AH3, SS2, SS3, N3, A3 from the latest install snapshot.

    System apps (the opening install burst) are filtered out first, so the
    counts reflect apps the user chose.  Apps with unknown rating are not
    counted against AI2/AI3, and apps with unknown update state are dropped
    from the AH1/SS3 fractions.
    """
    snapshot = _latest(events, "installed_apps")
    if snapshot is None:
        return {}
    records = sorted(
        (AppRecord.from_payload(a) for a in snapshot.payload["apps"]),
        key=lambda a: a.install_time,
    )
    timeline = split_system_apps(records, burst_min, burst_window, quiet_gap)
    apps = timeline.user_apps

    out: dict[str, float] = {}
    out["AI1"] = float(sum(1 for a in apps if a.source != "official-store" or a.av_flagged))
    out["AI2"] = float(sum(
        1 for a in apps
        if a.rating is not None and a.rating < LOW_RATING_THRESHOLD
        and any(p in dangerous_permissions for p in a.permissions)
    ))
    out["AI3"] = float(sum(
        1 for a in apps if a.rating is not None and a.rating < LOW_RATING_THRESHOLD
    ))
    out["AI4"] = float(sum(1 for a in apps if a.requires_root))

    with_state = [a for a in apps if a.up_to_date is not None]
    if with_state:
        out["AH1"] = sum(1 for a in with_state if not a.up_to_date) / len(with_state)

    out["AH3"] = float(sum(
        1 for ev in events if ev.kind == "app_change" and ev.payload["action"] == "delete"
    ))

    categories = {a.package: packages.classify(a.package) for a in apps}
    out["SS2"] = 1.0 if any(c == "antivirus" for c in categories.values()) else 0.0
    out["A3"] = 1.0 if any(c == "password-manager" for c in categories.values()) else 0.0
    out["N3"] = 1.0 if any(c == "vpn" for c in categories.values()) else 0.0

    security_apps = [
        a for a in apps if categories[a.package] is not None and a.up_to_date is not None
    ]
    if security_apps:
        out["SS3"] = sum(1 for a in security_apps if a.up_to_date) / len(security_apps)
    return out


def _open_intervals(events: list[AgentEvent]) -> list[tuple[float, float]]:
    """Closed intervals during which the device sat on an open Wi-Fi network."""
    if not events:
        return []
    stream_end = events[-1].timestamp
    wifi = [ev for ev in events if ev.kind == "wifi_change"]
    intervals = []
    for i, ev in enumerate(wifi):
        if ev.payload["ssid"] is not None and ev.payload["security"] == "open":
            end = wifi[i + 1].timestamp if i + 1 < len(wifi) else stream_end
            intervals.append((ev.timestamp, max(end, ev.timestamp)))
    return intervals


def _in_any(ts: float, intervals: list[tuple[float, float]]) -> bool:
    return any(lo <= ts <= hi for lo, hi in intervals)


def measure_connectivity_criteria(events: list[AgentEvent]) -> dict[str, float]:
    """N1, N2, N4 from Wi-Fi history; PC1 from radio power-state telemetry."""
    out: dict[str, float] = {}
    wifi = [ev for ev in events if ev.kind == "wifi_change"]
    if wifi:
        out["N1"] = float(sum(
            1 for ev in wifi
            if ev.payload["ssid"] is not None and ev.payload["security"] == "open"
        ))
        intervals = _open_intervals(events)
        downloads = 0
        plaintext_pii = 0
        for ev in events:
            if ev.kind != "browser_visit":
                continue
            if ev.payload["is_download"] and _in_any(ev.timestamp, intervals):
                downloads += 1
            if (ev.payload["sent_private_data"] and ev.payload["scheme"] == "http"
                    and _in_any(ev.timestamp, intervals)):
                plaintext_pii += 1
        out["N2"] = float(downloads)
        out["N4"] = float(plaintext_pii)

    radios = [ev for ev in events if ev.kind == "bluetooth_change"]
    if radios:
        stream_end = events[-1].timestamp
        idle_on = 0.0
        observed = stream_end - radios[0].timestamp
        for i, ev in enumerate(radios):
            end = radios[i + 1].timestamp if i + 1 < len(radios) else stream_end
            p = ev.payload
            if (p["bluetooth_on"] or p["nfc_on"]) and p["connected_devices"] == 0:
                idle_on += max(end - ev.timestamp, 0.0)
        fraction = idle_on / observed if observed > 0 else 0.0
        gps_always_on = all(ev.payload["gps_on"] for ev in radios)
        out["PC1"] = fraction + (1.0 if gps_always_on else 0.0)
    return out


def measure_content_criteria(
    events: list[AgentEvent], reputation: ReputationDb
) -> dict[str, float]:
    """B1, B2, B5, AH2 from browsing; VC1 from mail stats; VC2, A2 from SMS."""
    out: dict[str, float] = {}
    visits = [ev for ev in events if ev.kind == "browser_visit"]
    if visits:
        malicious = 0
        http_downloads = 0
        untrusted = 0
        ad_trackers = 0
        for ev in visits:
            verdict = reputation.lookup_domain(ev.payload["domain"])
            if verdict.security_categories & MALICIOUS_CATEGORIES:
                malicious += 1
            if "ad-click-tracker" in verdict.content_categories:
                ad_trackers += 1
            if ev.payload["is_download"] and ev.payload["scheme"] == "http":
                http_downloads += 1
            if ev.payload["untrusted_cert"]:
                untrusted += 1
        out["B1"] = float(malicious)
        out["B2"] = float(http_downloads)
        out["B5"] = float(untrusted)
        out["AH2"] = float(ad_trackers)

    mail = [ev for ev in events if ev.kind == "email_stats"]
    if mail:
        out["VC1"] = float(sum(ev.payload["spam_opened"] for ev in mail))

    sms = [ev for ev in events if ev.kind == "sms"]
    if sms:
        visited_urls = [(ev.timestamp, ev.payload["url"]) for ev in visits]
        followed = 0
        for ev in sms:
            if ev.payload["known_sender"]:
                continue
            for link in ev.payload["links"]:
                if any(ts >= ev.timestamp and url == link for ts, url in visited_urls):
                    followed += 1
        out["VC2"] = float(followed)
        out["A2"] = 1.0 if any(ev.payload["auth_code"] for ev in sms) else 0.0
    return out


def measure_device_criteria(
    events: list[AgentEvent], version_table: VersionTable
) -> dict[str, float]:
    """OS1 (OS current at report date), OS2 (rooted), SS5 (secure lock)."""
    out: dict[str, float] = {}
    software = _latest(events, "software")
    if software is not None:
        latest = version_table.latest_at(software.timestamp)
        if latest is not None:
            out["OS1"] = 1.0 if software.payload["os_version"] == latest else 0.0
    root = _latest(events, "root_check")
    if root is not None:
        out["OS2"] = 1.0 if root.payload["rooted"] else 0.0
    lock = _latest(events, "screen_lock")
    if lock is not None:
        out["SS5"] = 1.0 if lock.payload["type"] in SECURE_LOCK_TYPES else 0.0
    return out


def measure_agent_criteria(
    events: list[AgentEvent],
    reputation: ReputationDb,
    version_table: VersionTable,
    packages: PackageCategories | None = None,
    dangerous_permissions: frozenset[str] | None = None,
    burst_min: int = DEFAULT_BURST_MIN,
    burst_window: float = DEFAULT_BURST_WINDOW,
    quiet_gap: float = DEFAULT_QUIET_GAP,
) -> dict[str, float]:
    """All agent-measurable raw criterion values for one user's stream."""
    if packages is None:
        packages = load_package_categories()
    if dangerous_permissions is None:
        dangerous_permissions = load_dangerous_permissions()
    out: dict[str, float] = {}
    out.update(measure_application_criteria(
        events, packages, dangerous_permissions, burst_min, burst_window, quiet_gap
    ))
    out.update(measure_connectivity_criteria(events))
    out.update(measure_content_criteria(events, reputation))
    out.update(measure_device_criteria(events, version_table))
    return out
