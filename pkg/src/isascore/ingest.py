"""Per-source ingestion: turn raw inputs into measurement vectors.

Each ingest function measures raw criterion values per user and then
normalizes them across the observed population, producing the measurement
vectors consumed by scoring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .agent import (
    load_dangerous_permissions,
    load_package_categories,
    measure_agent_criteria,
    parse_event_log,
)
from .catalog import DataSource
from .errors import InputError
from .net import analyze_capture, measure_network_criteria, read_findings
from .questionnaire import load_question_map, measure_questionnaire_criteria, parse_responses
from .scoring import MeasurementVector, build_measurement_vectors


@dataclass
class IngestResult:
    source: DataSource
    raw_values: dict[str, dict[str, float]]
    vectors: list[MeasurementVector]
    notes: dict = field(default_factory=dict)

    @property
    def users(self) -> list[str]:
        return sorted(self.raw_values)

    def coverage_summary(self) -> str:
        lines = [f"source={self.source.value} users={len(self.vectors)}"]
        criteria: dict[str, int] = {}
        for mv in self.vectors:
            for cid in mv.coverage:
                criteria[cid] = criteria.get(cid, 0) + 1
        for cid in sorted(criteria):
            lines.append(f"  {cid}: {criteria[cid]}/{len(self.vectors)} users")
        return "\n".join(lines)


def ingest_agent_log(
    path,
    reputation,
    version_table,
    packages=None,
    dangerous_permissions=None,
    burst_min=10,
    burst_window=24 * 3600.0,
    quiet_gap=7 * 24 * 3600.0,
    malformed_threshold=0.10,
) -> IngestResult:
    log = parse_event_log(path, malformed_threshold)
    if packages is None:
        packages = load_package_categories()
    if dangerous_permissions is None:
        dangerous_permissions = load_dangerous_permissions()
    raws = {}
    for uid, events in log.streams.items():
        raws[uid] = measure_agent_criteria(
            events, reputation, version_table, packages, dangerous_permissions,
            burst_min, burst_window, quiet_gap,
        )
    vectors = build_measurement_vectors(raws, DataSource.AGENT)
    return IngestResult(
        DataSource.AGENT, raws, vectors,
        notes={"lines": log.total_lines, "skipped": log.skipped,
               "kinds": dict(log.kind_counts)},
    )


def ingest_capture(
    path, ip_user_map, reputation, trust_store, version_table,
    correlation_window=60.0, recurrence_days=3, capture_time=None,
) -> IngestResult:
    analysis = analyze_capture(
        path, ip_user_map, reputation, trust_store, version_table,
        capture_time=capture_time,
        correlation_window=correlation_window,
        recurrence_days=recurrence_days,
    )
    vectors = build_measurement_vectors(analysis.raw_values, DataSource.NETWORK)
    return IngestResult(
        DataSource.NETWORK, analysis.raw_values, vectors,
        notes={
            "packets": analysis.capture_stats.packets,
            "truncated": analysis.capture_stats.truncated,
            "unattributed": analysis.capture_stats.unattributed,
            "streams": analysis.streams,
            "tls_sessions": analysis.tls_sessions,
            "http_transactions": analysis.http_transactions,
            "findings": len(analysis.findings),
        },
    )


def ingest_findings(path, recurrence_days=3) -> IngestResult:
    """Ingest a findings JSONL file produced by the capture pipeline (or the
    synthetic generator) instead of a raw capture."""
    findings = read_findings(path)
    if not findings:
        raise InputError(f"{path}: no findings to ingest")
    raws = measure_network_criteria(findings, recurrence_days=recurrence_days)
    vectors = build_measurement_vectors(raws, DataSource.NETWORK)
    return IngestResult(
        DataSource.NETWORK, raws, vectors, notes={"findings": len(findings)},
    )


def ingest_questionnaire(path, question_map_path=None) -> IngestResult:
    qmap = load_question_map(question_map_path)
    sheets = parse_responses(path)
    if not sheets:
        raise InputError(f"{path}: no valid response rows")
    raws = measure_questionnaire_criteria(sheets, qmap)
    vectors = build_measurement_vectors(raws, DataSource.QUESTIONNAIRE)
    return IngestResult(
        DataSource.QUESTIONNAIRE, raws, vectors,
        notes={"sheets": len(sheets), "questions": len(qmap.entries)},
    )
