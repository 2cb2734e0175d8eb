"""Deep packet inspection of decoded HTTP payloads.

Scans request query strings, request bodies, and response bodies for
personal information leaking in the clear: email addresses, Luhn-valid
payment card numbers, password form fields, and GPS coordinate pairs.
Each distinct hit yields a B3 finding; plain-HTTP file downloads yield B2
findings carrying the body hash for reputation lookups.
"""

from __future__ import annotations

import hashlib
import re

from ..reputation import ReputationDb
from .findings import NetFinding

EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}")
CARD_RE = re.compile(r"(?<![\d.])(?:\d[ -]?){12,18}\d(?![\d.])")
PASSWORD_FIELD_RE = re.compile(
    r"(?:^|[?&])(password|passwd|pwd)=([^&\s]+)", re.IGNORECASE | re.MULTILINE
)
_COORD = r"-?\d{1,3}\.\d+"
GPS_RE = re.compile(
    rf"(?:lat|latitude)\s*[=:]\s*({_COORD})[^-\d]{{0,40}}?(?:lon|lng|longitude)\s*[=:]\s*({_COORD})",
    re.IGNORECASE,
)


def luhn_valid(digits: str) -> bool:
    """Standard mod-10 checksum over a digit string."""
    total = 0
    for i, ch in enumerate(reversed(digits)):
        d = int(ch)
        if i % 2 == 1:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


def find_card_numbers(text: str) -> list[str]:
    """Digit runs of 13..19 (separators allowed) passing the Luhn check."""
    hits = []
    for m in CARD_RE.finditer(text):
        digits = re.sub(r"[ -]", "", m.group(0))
        if 13 <= len(digits) <= 19 and luhn_valid(digits):
            hits.append(digits)
    return hits


def find_gps_pairs(text: str) -> list[tuple[float, float]]:
    pairs = []
    for m in GPS_RE.finditer(text):
        lat, lon = float(m.group(1)), float(m.group(2))
        if -90.0 <= lat <= 90.0 and -180.0 <= lon <= 180.0:
            pairs.append((lat, lon))
    return pairs


def _pii_hits(text: str) -> list[tuple[str, str]]:
    hits = [("email", m) for m in EMAIL_RE.findall(text)]
    hits += [("card", digits) for digits in find_card_numbers(text)]
    hits += [("password-field", m.group(1).lower()) for m in PASSWORD_FIELD_RE.finditer(text)]
    hits += [("gps", f"{lat},{lon}") for lat, lon in find_gps_pairs(text)]
    return hits


def scan_payloads(transactions, reputation: ReputationDb | None = None) -> list[NetFinding]:
    """B3 findings for plaintext personal data, B2 findings for downloads.

    Hits are deduplicated per transaction on (kind, matched text) so a value
    echoed back by the server is counted once.
    """
    findings = []
    for tx in transactions:
        if tx.user_id is None:
            continue
        texts = [tx.request_query]
        if tx.request_body:
            texts.append(tx.request_body.decode("latin-1"))
        if tx.decoded_body:
            texts.append(tx.decoded_body.decode("latin-1"))
        seen = set()
        for text in texts:
            if not text:
                continue
            for kind, value in _pii_hits(text):
                if (kind, value) in seen:
                    continue
                seen.add((kind, value))
                findings.append(NetFinding(
                    user_id=tx.user_id,
                    timestamp=tx.ts,
                    criterion_id="B3",
                    detail=f"{kind} in plaintext to {tx.host}{tx.path}",
                    flow_id=tx.stream.flow.flow_id,
                ))
        if tx.is_download and tx.decoded_body:
            digest = hashlib.sha256(tx.decoded_body).hexdigest()
            note = ""
            if reputation is not None and reputation.malicious_hashes:
                if digest in reputation.malicious_hashes:
                    note = " [known malicious]"
            findings.append(NetFinding(
                user_id=tx.user_id,
                timestamp=tx.ts,
                criterion_id="B2",
                detail=f"http download {tx.host}{tx.path} sha256={digest}{note}",
                flow_id=tx.stream.flow.flow_id,
            ))
    return findings
