"""Questionnaire ingestion and criterion measurement.

Responses arrive as a CSV of 1..5 ordinal answers.  The question map
declares, per question, which criteria it feeds, whether it is reverse
coded, and which answer scale it uses.  Answers are oriented so that 5 is
always the most cautious choice, and a criterion's raw value is the mean of
its oriented answers; population normalization happens downstream with
cautious polarity.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .catalog import CATALOG
from .errors import InputError

SCALES = frozenset({"likelihood", "frequency-onoff", "frequency-update"})


@dataclass(frozen=True)
class QuestionEntry:
    question_id: str
    criteria: tuple[str, ...]
    reverse_coded: bool
    scale: str


@dataclass(frozen=True)
class QuestionMap:
    entries: tuple[QuestionEntry, ...]

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if entry.question_id in seen:
                raise InputError(f"duplicate question {entry.question_id}")
            seen.add(entry.question_id)
            if not entry.criteria:
                raise InputError(f"question {entry.question_id} maps to no criterion")
            for cid in entry.criteria:
                if cid not in CATALOG:
                    raise InputError(f"unknown criterion {cid}")
            if entry.scale not in SCALES:
                raise InputError(f"unknown scale {entry.scale!r}")

    @property
    def question_ids(self) -> tuple[str, ...]:
        return tuple(e.question_id for e in self.entries)

    @property
    def criteria_covered(self) -> frozenset[str]:
        return frozenset(cid for e in self.entries for cid in e.criteria)


@dataclass(frozen=True)
class ResponseSheet:
    user_id: str
    answers: dict[str, int]

    def __post_init__(self):
        for qid, v in self.answers.items():
            if not 1 <= v <= 5:
                raise InputError(f"answer {qid}={v} outside 1..5")


def load_question_map(path=None) -> QuestionMap:
    """CSV ``question_id,criteria,orientation,scale``; default is the shipped map."""
    if path is None:
        with resources.files("isascore.data").joinpath("question_map.csv").open() as fh:
            rows = list(csv.reader(fh))
        label = "question_map.csv"
    else:
        p = Path(path)
        if not p.exists():
            raise InputError(f"question map not found: {p}")
        with open(p, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        label = str(p)
    entries = []
    for lineno, row in enumerate(rows, 1):
        if not row or row[0].strip().startswith("#"):
            continue
        if len(row) != 4:
            raise InputError(f"{label}:{lineno}: expected 4 columns")
        qid, crits, orientation, scale = (c.strip() for c in row)
        if orientation not in ("normal", "reverse"):
            raise InputError(f"{label}:{lineno}: orientation must be normal|reverse")
        entries.append(QuestionEntry(
            question_id=qid,
            criteria=tuple(c.strip() for c in crits.split("|") if c.strip()),
            reverse_coded=(orientation == "reverse"),
            scale=scale,
        ))
    if not entries:
        raise InputError(f"{label}: empty question map")
    return QuestionMap(tuple(entries))


def parse_responses(path) -> list[ResponseSheet]:
    """Read a response CSV with header ``uid,Q1..Qn``.

    Rows holding any out-of-range answer are rejected (and counted via the
    returned list length versus the file); empty cells are treated as
    unanswered.  A duplicate uid rejects the whole file.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"response sheet not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "uid":
            raise InputError(f"{path}: expected header 'uid,Q1..Qn'")
        question_ids = header[1:]
        sheets = []
        seen = set()
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            uid = row[0]
            if uid in seen:
                raise InputError(f"{path}:{lineno}: duplicate uid {uid}")
            seen.add(uid)
            answers = {}
            ok = True
            for qid, cell in zip(question_ids, row[1:]):
                cell = cell.strip()
                if not cell:
                    continue
                try:
                    v = int(cell)
                except ValueError:
                    ok = False
                    break
                if not 1 <= v <= 5:
                    ok = False
                    break
                answers[qid] = v
            if ok:
                sheets.append(ResponseSheet(uid, answers))
    return sheets


def orient(value: int, reverse_coded: bool) -> int:
    """Map a 1..5 answer onto the cautiousness scale (5 = most cautious)."""
    return 6 - value if reverse_coded else value


def measure_questionnaire_criteria(
    sheets: list[ResponseSheet], qmap: QuestionMap
) -> dict[str, dict[str, float]]:
    """Per-user raw criterion values in [1, 5].

    A criterion is the mean of the oriented answers of its mapped questions;
    questions missing from a sheet are skipped, and a criterion with no
    answered question at all stays unmeasured for that user.
    """
    if not sheets:
        raise InputError("no response sheets to measure")
    out: dict[str, dict[str, float]] = {}
    for sheet in sheets:
        per_criterion: dict[str, list[int]] = {}
        for entry in qmap.entries:
            answer = sheet.answers.get(entry.question_id)
            if answer is None:
                continue
            oriented = orient(answer, entry.reverse_coded)
            for cid in entry.criteria:
                per_criterion.setdefault(cid, []).append(oriented)
        out[sheet.user_id] = {
            cid: sum(vals) / len(vals) for cid, vals in per_criterion.items()
        }
    return out
