"""Aggregate network findings into per-user raw criterion values.

Count criteria sum their findings.  The security-app indicators (SS2, SS3,
A3) require recurrent contact: findings on at least ``recurrence_days``
distinct UTC days flip the indicator to 1.  OS1 is carried by indicator
findings whose detail records whether the observed version was current;
the most recent one wins.  Users in the roster with traffic but no findings
still get zero-valued coverage for the count criteria, since silence on an
observed link is evidence of caution.
"""

from __future__ import annotations

from collections import defaultdict
from datetime import datetime, timezone

from .findings import NetFinding

COUNT_CRITERIA = ("B1", "B2", "B3", "B4", "B5", "VC1", "VC2", "AH2", "AI1")
RECURRENT_CRITERIA = ("SS2", "SS3", "A3")
DEFAULT_RECURRENCE_DAYS = 3

OS1_CURRENT = "up-to-date"
OS1_OUTDATED = "outdated"


def os1_finding(user_id: str, ts: float, current: bool, flow_id: str = "") -> NetFinding:
    return NetFinding(
        user_id=user_id,
        timestamp=ts,
        criterion_id="OS1",
        detail=OS1_CURRENT if current else OS1_OUTDATED,
        flow_id=flow_id,
    )


def _utc_day(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%d")


def measure_network_criteria(
    findings: list[NetFinding],
    roster: set[str] | None = None,
    recurrence_days: int = DEFAULT_RECURRENCE_DAYS,
) -> dict[str, dict[str, float]]:
    """Per-user raw values for the 13 network-measurable criteria.

    ``roster`` is the set of users observed on the wire; it defaults to the
    users appearing in the findings.  OS1 stays unmeasured for users without
    an OS1 indicator finding.
    """
    if roster is None:
        roster = {f.user_id for f in findings}

    counts: dict[str, dict[str, int]] = defaultdict(lambda: defaultdict(int))
    days: dict[str, dict[str, set[str]]] = defaultdict(lambda: defaultdict(set))
    os1: dict[str, tuple[float, str]] = {}
    for f in findings:
        if f.criterion_id in COUNT_CRITERIA:
            counts[f.user_id][f.criterion_id] += 1
        elif f.criterion_id in RECURRENT_CRITERIA:
            days[f.user_id][f.criterion_id].add(_utc_day(f.timestamp))
        elif f.criterion_id == "OS1":
            prev = os1.get(f.user_id)
            if prev is None or f.timestamp >= prev[0]:
                os1[f.user_id] = (f.timestamp, f.detail)

    out: dict[str, dict[str, float]] = {}
    for uid in sorted(roster):
        vals: dict[str, float] = {}
        for cid in COUNT_CRITERIA:
            vals[cid] = float(counts[uid][cid]) if uid in counts else 0.0
        for cid in RECURRENT_CRITERIA:
            observed_days = days[uid][cid] if uid in days else set()
            vals[cid] = 1.0 if len(observed_days) >= recurrence_days else 0.0
        if uid in os1:
            vals["OS1"] = 1.0 if os1[uid][1] == OS1_CURRENT else 0.0
        out[uid] = vals
    return out
