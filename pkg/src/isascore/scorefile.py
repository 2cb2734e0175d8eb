"""Score file I/O: one CSV row per scored user.

Columns: ``uid,attack_class,data_source,score,level,covered_weight_fraction``.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .catalog import DataSource
from .errors import InputError
from .models import AttackClass
from .scoring import AwarenessLevel, IsaScore, Level

_HEADER = ["uid", "attack_class", "data_source", "score", "level",
           "covered_weight_fraction"]


def write_scores(rows: list[tuple[IsaScore, Level]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_HEADER)
        for score, level in rows:
            writer.writerow([
                score.user_id, score.attack_class.value, score.data_source.value,
                f"{score.score:.12g}", level.value,
                f"{score.covered_weight_fraction:.12g}",
            ])


def read_scores(path) -> list[tuple[IsaScore, Level]]:
    path = Path(path)
    if not path.exists():
        raise InputError(f"score file not found: {path}")
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _HEADER:
            raise InputError(f"{path}: expected header {','.join(_HEADER)}")
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != 6:
                raise InputError(f"{path}:{lineno}: expected 6 columns")
            try:
                score = IsaScore(
                    user_id=row[0],
                    attack_class=AttackClass(row[1]),
                    data_source=DataSource(row[2]),
                    score=float(row[3]),
                    covered_weight_fraction=float(row[5]),
                )
                level = Level(row[4])
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
            rows.append((score, level))
    return rows
