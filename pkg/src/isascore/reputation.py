"""Domain and file-hash reputation lookups.

The local database classifies domain suffixes into security categories
(what is dangerous about a domain) and content categories (what kind of
service it is).  Lookups are longest label-boundary suffix matches, so a
record for ``example.com`` covers ``a.example.com`` but not
``notexample.com``.  A remote enrichment client is available behind the
same verdict type for deployments with an external provider; it degrades
to an empty verdict on transport failures instead of raising.
"""

from __future__ import annotations

import json
import logging
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError

logger = logging.getLogger(__name__)

SECURITY_CATEGORIES = frozenset(
    {"malware", "phishing", "spam", "scam", "ads", "privacy-risk"}
)
CONTENT_CATEGORIES = frozenset(
    {
        "email-service",
        "social-network",
        "antivirus-vendor",
        "password-manager",
        "vpn-provider",
        "ad-click-tracker",
        "app-store-official",
        "app-store-unofficial",
        "news",
        "forum",
        "other",
    }
)

#: security categories treated as outright malicious in criteria measurement
MALICIOUS_CATEGORIES = frozenset({"malware", "phishing"})


@dataclass(frozen=True)
class DomainRecord:
    domain_suffix: str
    security_categories: frozenset[str]
    content_categories: frozenset[str]


@dataclass(frozen=True)
class Verdict:
    queried_name: str
    matched_suffix: str | None
    security_categories: frozenset[str]
    content_categories: frozenset[str]
    source: str = "local-db"
    error: str | None = None


def _normalize_name(name: str) -> str:
    return name.strip().strip(".").lower()


class ReputationDb:
    """Immutable suffix-indexed domain DB plus an optional malicious-hash set."""

    def __init__(self, records: list[DomainRecord], malicious_hashes: frozenset[str] = frozenset()):
        self._by_suffix: dict[str, DomainRecord] = {}
        for rec in records:
            if rec.domain_suffix in self._by_suffix:
                raise InputError(f"duplicate suffix {rec.domain_suffix}")
            self._by_suffix[rec.domain_suffix] = rec
        self.malicious_hashes = malicious_hashes

    def __len__(self) -> int:
        return len(self._by_suffix)

    def lookup_domain(self, name: str) -> Verdict:
        """Most-specific suffix match; unknown names get an empty verdict."""
        if not name or not name.strip(". "):
            raise InputError("domain name must be nonempty")
        normalized = _normalize_name(name)
        labels = normalized.split(".")
        for start in range(len(labels)):
            candidate = ".".join(labels[start:])
            rec = self._by_suffix.get(candidate)
            if rec is not None:
                return Verdict(
                    queried_name=normalized,
                    matched_suffix=rec.domain_suffix,
                    security_categories=rec.security_categories,
                    content_categories=rec.content_categories,
                )
        return Verdict(normalized, None, frozenset(), frozenset())

    def lookup_file_hash(self, sha256: str) -> bool:
        h = sha256.strip().lower()
        if len(h) != 64 or any(c not in "0123456789abcdef" for c in h):
            raise InputError(f"malformed sha256 hash: {sha256!r}")
        return h in self.malicious_hashes


def _parse_cats(raw: str, allowed: frozenset[str], path, lineno) -> frozenset[str]:
    cats = set()
    for token in raw.split("|"):
        token = token.strip().lower()
        if not token:
            continue
        if token not in allowed:
            raise InputError(f"{path}:{lineno}: unknown category {token!r}")
        cats.add(token)
    return frozenset(cats)


def load_reputation_db(path, hash_list_path=None) -> ReputationDb:
    """Load the CSV domain DB: ``suffix,security_cats,content_cats``.

    Category lists are |-separated and may be empty.  Rows failing to parse
    are rejected with their line number; duplicate suffixes are rejected.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"reputation db not found: {path}")
    records = []
    seen = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise InputError(f"{path}:{lineno}: expected 'suffix,security,content'")
        suffix = _normalize_name(parts[0])
        if not suffix:
            raise InputError(f"{path}:{lineno}: empty domain suffix")
        if suffix in seen:
            raise InputError(f"{path}:{lineno}: duplicate suffix {suffix}")
        seen.add(suffix)
        records.append(
            DomainRecord(
                domain_suffix=suffix,
                security_categories=_parse_cats(parts[1], SECURITY_CATEGORIES, path, lineno),
                content_categories=_parse_cats(parts[2], CONTENT_CATEGORIES, path, lineno),
            )
        )
    hashes = load_hash_list(hash_list_path) if hash_list_path else frozenset()
    return ReputationDb(records, hashes)


def load_hash_list(path) -> frozenset[str]:
    """One lowercase sha256 per line; comments and blank lines allowed."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"hash list not found: {path}")
    hashes = set()
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        h = line.lower()
        if len(h) != 64 or any(c not in "0123456789abcdef" for c in h):
            raise InputError(f"{path}:{lineno}: malformed sha256 {line!r}")
        hashes.add(h)
    return frozenset(hashes)


# module-level functions mirroring the Db methods, for symmetry with loaders
def lookup_domain(db: ReputationDb, name: str) -> Verdict:
    return db.lookup_domain(name)


def lookup_file_hash(db: ReputationDb, sha256: str) -> bool:
    return db.lookup_file_hash(sha256)


@dataclass
class RemoteConfig:
    enabled: bool = False
    endpoint: str | None = None
    api_key: str | None = None
    timeout: float = 5.0
    #: minimum seconds between requests to the same host
    min_interval: float = 0.0


class RemoteClient:
    """Thin HTTP client for an external reputation provider.

    The provider is expected to answer GET ``<endpoint>?q=<name>`` with JSON
    ``{"security": [...], "content": [...]}``; unknown category tokens are
    dropped.  Any transport or decode failure yields a degraded verdict with
    the error recorded rather than an exception.
    """

    def __init__(self, config: RemoteConfig):
        self.config = config
        self._lock = threading.Lock()
        self._last_request: dict[str, float] = {}

    def enrich(self, name_or_hash: str) -> Verdict:
        if not self.config.enabled:
            raise InputError("remote enrichment disabled")
        if not self.config.endpoint:
            raise InputError("remote enrichment enabled but no endpoint configured")
        url = f"{self.config.endpoint}?q={urllib.parse.quote(name_or_hash)}"
        self._throttle(urllib.parse.urlparse(url).netloc)
        headers = {}
        if self.config.api_key:
            headers["X-Api-Key"] = self.config.api_key
        request = urllib.request.Request(url, headers=headers)
        try:
            with urllib.request.urlopen(request, timeout=self.config.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, TimeoutError, ValueError, OSError) as exc:
            logger.warning("remote enrichment failed for %s: %s", name_or_hash, exc)
            return Verdict(
                queried_name=name_or_hash,
                matched_suffix=None,
                security_categories=frozenset(),
                content_categories=frozenset(),
                source="remote",
                error=str(exc),
            )
        security = frozenset(
            c for c in payload.get("security", []) if c in SECURITY_CATEGORIES
        )
        content = frozenset(
            c for c in payload.get("content", []) if c in CONTENT_CATEGORIES
        )
        return Verdict(name_or_hash, payload.get("match"), security, content, source="remote")

    def _throttle(self, host: str) -> None:
        if self.config.min_interval <= 0:
            return
        with self._lock:
            now = time.monotonic()
            wait = self._last_request.get(host, -1e9) + self.config.min_interval - now
            if wait > 0:
                time.sleep(wait)
                now = time.monotonic()
            self._last_request[host] = now


def remote_enrich(config: RemoteConfig, name_or_hash: str) -> Verdict:
    return RemoteClient(config).enrich(name_or_hash)
