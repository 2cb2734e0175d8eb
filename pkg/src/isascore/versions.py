"""OS release table: which version counts as current on a given date."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import InputError


@dataclass(frozen=True)
class VersionTable:
    #: (effective unix timestamp, version string), ascending by timestamp
    rows: tuple[tuple[float, str], ...]

    def latest_at(self, ts: float) -> str | None:
        current = None
        for effective, version in self.rows:
            if effective <= ts:
                current = version
            else:
                break
        return current


def _parse_date(token: str) -> float:
    token = token.strip()
    try:
        return float(token)
    except ValueError:
        pass
    try:
        dt = datetime.fromisoformat(token)
    except ValueError:
        raise InputError(f"bad effective_date {token!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def load_version_table(path) -> VersionTable:
    """CSV ``effective_date,latest_os_version``; dates ISO-8601 or epoch seconds."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"version table not found: {path}")
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or row[0].strip().startswith("#"):
                continue
            if row[0].strip().lower() == "effective_date":
                continue
            if len(row) != 2:
                raise InputError(f"{path}:{lineno}: expected 'effective_date,latest_os_version'")
            rows.append((_parse_date(row[0]), row[1].strip()))
    if not rows:
        raise InputError(f"{path}: empty version table")
    rows.sort(key=lambda r: r[0])
    return VersionTable(tuple(rows))
