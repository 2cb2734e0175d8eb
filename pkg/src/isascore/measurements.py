"""Measurement file I/O.

One CSV row per (user, criterion): ``uid,criterion,value,measured``.
Unmeasured criteria are written with an empty value and measured=0 so each
user carries a full 30-criterion coverage mask.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .catalog import CRITERION_IDS, DataSource
from .errors import InputError
from .scoring import MeasurementVector

_HEADER = ["uid", "criterion", "value", "measured"]


def write_measurements(vectors: list[MeasurementVector], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_HEADER)
        for mv in vectors:
            for cid in CRITERION_IDS:
                if cid in mv.coverage:
                    writer.writerow([mv.user_id, cid, f"{mv.values[cid]:.12g}", 1])
                else:
                    writer.writerow([mv.user_id, cid, "", 0])


def read_measurements(path, source: DataSource) -> list[MeasurementVector]:
    """Load measurement vectors back; the data source is supplied by the caller
    because the file format intentionally does not record it."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"measurement file not found: {path}")
    per_user: dict[str, dict[str, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _HEADER:
            raise InputError(f"{path}: expected header {','.join(_HEADER)}")
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != 4:
                raise InputError(f"{path}:{lineno}: expected 4 columns")
            uid, cid, value, measured = row
            per_user.setdefault(uid, {})
            if measured == "1":
                try:
                    per_user[uid][cid] = float(value)
                except ValueError:
                    raise InputError(f"{path}:{lineno}: bad value {value!r}") from None
            elif measured != "0":
                raise InputError(f"{path}:{lineno}: measured flag must be 0 or 1")
    return [
        MeasurementVector(uid, source, vals, frozenset(vals))
        for uid, vals in sorted(per_user.items())
    ]
