"""Catalog of the 30 smartphone security-awareness criteria.

Each criterion is one measurable indicator of cautious or reckless behavior.
The catalog records which data sources can measure it and the direction of
its raw value (whether a larger raw reading means more cautious or more
reckless behavior), which drives population normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class DataSource(str, Enum):
    AGENT = "agent"
    NETWORK = "network"
    QUESTIONNAIRE = "questionnaire"


class Polarity(str, Enum):
    #: larger raw value indicates more cautious behavior
    CAUTIOUS = "higher-raw-is-cautious"
    #: larger raw value indicates more reckless behavior
    RECKLESS = "higher-raw-is-reckless"


@dataclass(frozen=True)
class Criterion:
    id: str
    description: str
    polarity: Polarity
    measurable_by: frozenset[DataSource]


_A = DataSource.AGENT
_N = DataSource.NETWORK
_Q = DataSource.QUESTIONNAIRE


def _c(cid, description, polarity, *sources):
    return Criterion(cid, description, polarity, frozenset(sources))


# Questionnaires can measure every criterion; agent and network coverage is
# narrower and differs per criterion.
_CRITERIA = [
    # application installation
    _c("AI1", "apps installed from untrusted or unofficial sources", Polarity.RECKLESS, _A, _N, _Q),
    _c("AI2", "low-rated apps holding dangerous permissions", Polarity.RECKLESS, _A, _Q),
    _c("AI3", "low-rated apps installed", Polarity.RECKLESS, _A, _Q),
    _c("AI4", "apps requiring root privileges installed", Polarity.RECKLESS, _A, _Q),
    # application handling
    _c("AH1", "installed apps left out of date", Polarity.RECKLESS, _A, _Q),
    _c("AH2", "advertisement and click-tracker traffic", Polarity.RECKLESS, _A, _N, _Q),
    _c("AH3", "app cleanup activity (uninstalls)", Polarity.CAUTIOUS, _A, _Q),
    # browser
    _c("B1", "visits to malicious domains", Polarity.RECKLESS, _A, _N, _Q),
    _c("B2", "file downloads over plain HTTP", Polarity.RECKLESS, _A, _N, _Q),
    _c("B3", "personal data sent unencrypted", Polarity.RECKLESS, _N, _Q),
    _c("B4", "personal data entered into pop-ups", Polarity.RECKLESS, _N, _Q),
    _c("B5", "untrusted TLS certificates accepted", Polarity.RECKLESS, _A, _N, _Q),
    # virtual communication
    _c("VC1", "spam messages opened", Polarity.RECKLESS, _A, _N, _Q),
    _c("VC2", "links from unknown senders followed", Polarity.RECKLESS, _A, _N, _Q),
    # account
    _c("A1", "password hygiene", Polarity.CAUTIOUS, _Q),
    _c("A2", "two-factor authentication in use", Polarity.CAUTIOUS, _A, _Q),
    _c("A3", "password manager in use", Polarity.CAUTIOUS, _A, _N, _Q),
    # operating system
    _c("OS1", "operating system kept current", Polarity.CAUTIOUS, _A, _N, _Q),
    _c("OS2", "device rooted or jailbroken", Polarity.RECKLESS, _A, _Q),
    # security systems
    _c("SS1", "built-in security features in use", Polarity.CAUTIOUS, _Q),
    _c("SS2", "antivirus app present", Polarity.CAUTIOUS, _A, _N, _Q),
    _c("SS3", "security apps kept current", Polarity.CAUTIOUS, _A, _N, _Q),
    _c("SS4", "heed for security alerts", Polarity.CAUTIOUS, _Q),
    _c("SS5", "screen lock configured", Polarity.CAUTIOUS, _A, _Q),
    # networks
    _c("N1", "connections to open Wi-Fi networks", Polarity.RECKLESS, _A, _Q),
    _c("N2", "downloads while on open Wi-Fi", Polarity.RECKLESS, _A, _Q),
    _c("N3", "VPN service in use", Polarity.CAUTIOUS, _A, _Q),
    _c("N4", "private data sent over open Wi-Fi", Polarity.RECKLESS, _A, _Q),
    # physical channels
    _c("PC1", "radios left on while unused", Polarity.RECKLESS, _A, _Q),
    _c("PC2", "device plugged into unknown hardware", Polarity.RECKLESS, _Q),
]

CATALOG: dict[str, Criterion] = {c.id: c for c in _CRITERIA}

CRITERION_IDS: tuple[str, ...] = tuple(c.id for c in _CRITERIA)

assert len(CATALOG) == 30, "criterion catalog must hold exactly 30 entries"


def criteria_for(source: DataSource) -> frozenset[str]:
    """IDs of every criterion measurable by the given data source."""
    return frozenset(c.id for c in _CRITERIA if source in c.measurable_by)


def require_known(criterion_id: str) -> Criterion:
    """Return the catalog entry for an ID, raising on unknown IDs."""
    try:
        return CATALOG[criterion_id]
    except KeyError:
        raise ValueError(f"unknown criterion {criterion_id}") from None
