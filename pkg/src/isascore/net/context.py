"""Contextual time-correlation over encrypted traffic.

Some behaviors are invisible in the payload but show up as co-occurring
domain activity.  Joins use a closed time window per user: a malicious or
spam domain contacted while email-service traffic is active suggests a
followed mail link (VC2/VC1); plaintext personal data sent while an
ad-click tracker is active suggests a filled pop-up (B4).  Ad-tracker
visits also count on their own (AH2).  Each trigger event is counted once,
referencing its nearest context partner.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from ..reputation import MALICIOUS_CATEGORIES
from .findings import NetFinding

DEFAULT_WINDOW = 60.0


@dataclass(frozen=True)
class DomainVisit:
    user_id: str
    ts: float
    domain: str
    security_categories: frozenset[str]
    content_categories: frozenset[str]
    flow_id: str


def _nearest_within(ts: float, sorted_ts: list[float], window: float) -> float | None:
    """Closest timestamp with |delta| <= window, or None (closed interval)."""
    if not sorted_ts:
        return None
    i = bisect.bisect_left(sorted_ts, ts)
    best = None
    for j in (i - 1, i):
        if 0 <= j < len(sorted_ts):
            if abs(sorted_ts[j] - ts) <= window and (
                best is None or abs(sorted_ts[j] - ts) < abs(best - ts)
            ):
                best = sorted_ts[j]
    return best


def correlate_context(findings, domain_visits, window: float = DEFAULT_WINDOW) -> list[NetFinding]:
    """Emit VC1, VC2, B4, and AH2 findings from time-correlated activity."""
    by_user_email: dict[str, list[float]] = {}
    by_user_ads: dict[str, list[DomainVisit]] = {}
    for v in domain_visits:
        if "email-service" in v.content_categories:
            by_user_email.setdefault(v.user_id, []).append(v.ts)
        if "ad-click-tracker" in v.content_categories:
            by_user_ads.setdefault(v.user_id, []).append(v)
    for ts_list in by_user_email.values():
        ts_list.sort()
    ad_ts = {
        uid: sorted(v.ts for v in visits) for uid, visits in by_user_ads.items()
    }

    out = []
    for v in domain_visits:
        emails = by_user_email.get(v.user_id, [])
        if v.security_categories & MALICIOUS_CATEGORIES:
            partner = _nearest_within(v.ts, emails, window)
            if partner is not None:
                out.append(NetFinding(
                    v.user_id, v.ts, "VC2",
                    f"malicious domain {v.domain} within {window:g}s of email activity at {partner:g}",
                    v.flow_id,
                ))
        if "spam" in v.security_categories:
            partner = _nearest_within(v.ts, emails, window)
            if partner is not None:
                out.append(NetFinding(
                    v.user_id, v.ts, "VC1",
                    f"spam domain {v.domain} within {window:g}s of email activity at {partner:g}",
                    v.flow_id,
                ))

    for f in findings:
        if f.criterion_id != "B3":
            continue
        partner = _nearest_within(f.timestamp, ad_ts.get(f.user_id, []), window)
        if partner is not None:
            out.append(NetFinding(
                f.user_id, f.timestamp, "B4",
                f"personal data within {window:g}s of ad-tracker activity at {partner:g}",
                f.flow_id,
            ))

    for uid, visits in by_user_ads.items():
        for v in visits:
            out.append(NetFinding(
                uid, v.ts, "AH2", f"ad-click-tracker visit to {v.domain}", v.flow_id,
            ))
    return out
