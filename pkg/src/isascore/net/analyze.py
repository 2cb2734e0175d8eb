"""End-to-end capture analysis driver.

Runs the pipeline over one capture: packet decode, stream reassembly, TLS
and HTTP analysis, payload inspection, domain reputation, contextual
correlation, and finally aggregation into per-user raw criterion values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..reputation import MALICIOUS_CATEGORIES, ReputationDb
from ..versions import VersionTable
from .context import DEFAULT_WINDOW, DomainVisit, correlate_context
from .criteria import DEFAULT_RECURRENCE_DAYS, measure_network_criteria, os1_finding
from .dpi import scan_payloads
from .findings import NetFinding
from .http import HttpTransaction, extract_device_profile, parse_http_transactions
from .pcap import CaptureStats, IpUserMap, read_capture
from .reassembly import DEFAULT_WINDOW as REASSEMBLY_WINDOW, reassemble_streams
from .tls import TlsSession, TrustStore, detect_untrusted_cert_acceptance, parse_tls_sessions


@dataclass
class NetAnalysis:
    findings: list[NetFinding]
    raw_values: dict[str, dict[str, float]]
    roster: set[str]
    capture_stats: CaptureStats
    streams: int = 0
    tls_sessions: int = 0
    http_transactions: int = 0
    malformed_http: int = 0


def _domain_visits(transactions: list[HttpTransaction],
                   tls_sessions: list[TlsSession],
                   reputation: ReputationDb) -> list[DomainVisit]:
    visits = []
    for tx in transactions:
        if tx.user_id is None or not tx.host:
            continue
        verdict = reputation.lookup_domain(tx.host)
        visits.append(DomainVisit(
            user_id=tx.user_id, ts=tx.ts, domain=tx.host,
            security_categories=verdict.security_categories,
            content_categories=verdict.content_categories,
            flow_id=tx.stream.flow.flow_id,
        ))
    for session in tls_sessions:
        if session.user_id is None or not session.sni:
            continue
        verdict = reputation.lookup_domain(session.sni)
        visits.append(DomainVisit(
            user_id=session.user_id, ts=session.stream.flow.first_ts,
            domain=session.sni,
            security_categories=verdict.security_categories,
            content_categories=verdict.content_categories,
            flow_id=session.stream.flow.flow_id,
        ))
    visits.sort(key=lambda v: (v.user_id, v.ts))
    return visits


def analyze_capture(
    capture_path,
    ip_user_map: IpUserMap,
    reputation: ReputationDb,
    trust_store: TrustStore,
    version_table: VersionTable,
    capture_time: float | None = None,
    correlation_window: float = DEFAULT_WINDOW,
    recurrence_days: int = DEFAULT_RECURRENCE_DAYS,
    reassembly_window: int = REASSEMBLY_WINDOW,
) -> NetAnalysis:
    """Analyze a pcap file into findings and per-user raw criterion values.

    ``capture_time`` anchors certificate validity checks and defaults to the
    last packet timestamp.
    """
    stats = CaptureStats()
    packets = list(read_capture(capture_path, ip_user_map, stats))
    roster = {p.user_id for p in packets if p.user_id is not None}
    if capture_time is None:
        capture_time = max((p.ts for p in packets), default=0.0)

    streams = reassemble_streams(packets, window=reassembly_window)
    tls_sessions = parse_tls_sessions(streams, trust_store, capture_time)
    transactions, malformed = parse_http_transactions(streams)

    findings: list[NetFinding] = []
    findings += detect_untrusted_cert_acceptance(tls_sessions)
    findings += scan_payloads(transactions, reputation)

    visits = _domain_visits(transactions, tls_sessions, reputation)
    for v in visits:
        if v.security_categories & MALICIOUS_CATEGORIES:
            findings.append(NetFinding(
                v.user_id, v.ts, "B1", f"visit to malicious domain {v.domain}", v.flow_id,
            ))
        if "antivirus-vendor" in v.content_categories:
            findings.append(NetFinding(
                v.user_id, v.ts, "SS2", f"antivirus vendor contact {v.domain}", v.flow_id,
            ))
            findings.append(NetFinding(
                v.user_id, v.ts, "SS3", f"antivirus vendor contact {v.domain}", v.flow_id,
            ))
        if "password-manager" in v.content_categories:
            findings.append(NetFinding(
                v.user_id, v.ts, "A3", f"password manager contact {v.domain}", v.flow_id,
            ))

    # APK downloads from hosts categorized as unofficial app stores
    for tx in transactions:
        if tx.user_id is None or not tx.is_apk or not tx.host:
            continue
        verdict = reputation.lookup_domain(tx.host)
        if "app-store-unofficial" in verdict.content_categories:
            findings.append(NetFinding(
                tx.user_id, tx.ts, "AI1",
                f"apk download from unofficial store {tx.host}{tx.path}",
                tx.stream.flow.flow_id,
            ))

    findings += correlate_context(findings, visits, correlation_window)

    for uid, indicator in extract_device_profile(transactions, version_table).items():
        findings.append(os1_finding(uid, capture_time, indicator >= 1.0))

    findings.sort(key=lambda f: (f.user_id, f.timestamp, f.criterion_id))
    raw = measure_network_criteria(findings, roster, recurrence_days)
    return NetAnalysis(
        findings=findings,
        raw_values=raw,
        roster=roster,
        capture_stats=stats,
        streams=len(streams),
        tls_sessions=len(tls_sessions),
        http_transactions=len(transactions),
        malformed_http=malformed,
    )
