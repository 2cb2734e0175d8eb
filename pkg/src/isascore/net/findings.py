"""Atomic evidence records produced by the network pipeline.

Findings serialize as JSON Lines: ``{"uid","ts","criterion","detail","flow"}``.
Every finding is tagged with a network-measurable criterion; aggregation
into per-user raw values happens in ``criteria.measure_network_criteria``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..catalog import DataSource, criteria_for
from ..errors import InputError

NETWORK_CRITERIA = criteria_for(DataSource.NETWORK)


@dataclass(frozen=True)
class NetFinding:
    user_id: str
    timestamp: float
    criterion_id: str
    detail: str
    flow_id: str

    def __post_init__(self):
        if self.criterion_id not in NETWORK_CRITERIA:
            raise InputError(
                f"criterion {self.criterion_id} is not network-measurable"
            )


def write_findings(findings, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for f in findings:
            fh.write(json.dumps({
                "uid": f.user_id,
                "ts": f.timestamp,
                "criterion": f.criterion_id,
                "detail": f.detail,
                "flow": f.flow_id,
            }, sort_keys=True) + "\n")


def read_findings(path) -> list[NetFinding]:
    path = Path(path)
    if not path.exists():
        raise InputError(f"findings file not found: {path}")
    findings = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            findings.append(NetFinding(
                user_id=obj["uid"],
                timestamp=float(obj["ts"]),
                criterion_id=obj["criterion"],
                detail=obj.get("detail", ""),
                flow_id=obj.get("flow", ""),
            ))
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{path}:{lineno}: bad finding: {exc}") from exc
    return findings
