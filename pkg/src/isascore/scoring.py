"""Score computation and awareness-level partitioning.

The per-user score for an attack class and data source is the weighted mean
of the user's normalized criterion values, restricted to the criteria the
source actually measured for that user:

    score = sum(w_i * c_i for measured i) / sum(w_i for measured i)

Users are then partitioned into low / medium / high awareness around the
population mean: low below mean - beta*std, high above mean + beta*std, and
medium inside the closed band (both boundaries are medium).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .catalog import CATALOG, DataSource, Polarity, criteria_for
from .errors import InputError
from .models import AttackClass, AwarenessModel


class Level(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


@dataclass(frozen=True)
class MeasurementVector:
    """Normalized criterion values for one user from one data source."""

    user_id: str
    data_source: DataSource
    values: dict[str, float]
    coverage: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "coverage", frozenset(self.coverage))
        measurable = criteria_for(self.data_source)
        for cid in self.coverage:
            if cid not in measurable:
                raise InputError(
                    f"criterion {cid} is not measurable by source {self.data_source.value}"
                )
        for cid, v in self.values.items():
            if cid not in self.coverage:
                raise InputError(f"value for {cid} outside coverage set")
            if not 0.0 <= v <= 1.0:
                raise InputError(f"normalized value for {cid} out of [0,1]: {v}")


@dataclass(frozen=True)
class PopulationStats:
    mean: float
    std: float
    beta: float

    def __post_init__(self):
        if self.std < 0:
            raise InputError("population std must be nonnegative")
        if self.beta < 0:
            raise InputError("beta must be nonnegative")


@dataclass(frozen=True)
class IsaScore:
    user_id: str
    attack_class: AttackClass
    data_source: DataSource
    score: float
    covered_weight_fraction: float


@dataclass(frozen=True)
class AwarenessLevel:
    user_id: str
    level: Level


def normalize_population(raw: dict[str, float], polarity: Polarity) -> dict[str, float]:
    """Min-max normalize raw values across the population to [0, 1].

    Reckless-polarity criteria are flipped so that 1 always means the most
    cautious user.  When every user has the same raw value the criterion
    carries no ranking information and everyone gets 0.5.
    """
    if not raw:
        raise InputError("cannot normalize an empty population")
    lo = min(raw.values())
    hi = max(raw.values())
    if hi == lo:
        return {uid: 0.5 for uid in raw}
    span = hi - lo
    out = {}
    for uid, v in raw.items():
        x = (v - lo) / span
        out[uid] = 1.0 - x if polarity is Polarity.RECKLESS else x
    return out


def compute_isa_score(mv: MeasurementVector, model: AwarenessModel) -> IsaScore:
    """Evaluate the weighted score over the criteria the vector covers.

    Criteria missing from the vector's coverage are dropped from both the
    numerator and the denominator; the dropped weight is reported through
    ``covered_weight_fraction`` (model weights sum to 1 after loading).
    """
    covered = [cid for cid in mv.coverage if model.weights.get(cid, 0.0) > 0.0]
    if not covered:
        raise InputError("no measurable criteria for this model/source")
    wsum = sum(model.weights[cid] for cid in covered)
    s = sum(model.weights[cid] * mv.values[cid] for cid in covered) / wsum
    return IsaScore(
        user_id=mv.user_id,
        attack_class=model.attack_class,
        data_source=mv.data_source,
        score=s,
        covered_weight_fraction=wsum,
    )


def population_stats(scores: list[IsaScore], beta: float) -> PopulationStats:
    """Mean and population (not sample) standard deviation of the scores."""
    if not scores:
        raise InputError("cannot partition an empty score list")
    if beta < 0:
        raise InputError("beta must be nonnegative")
    xs = [s.score for s in scores]
    mu = sum(xs) / len(xs)
    sigma = math.sqrt(sum((x - mu) ** 2 for x in xs) / len(xs))
    return PopulationStats(mean=mu, std=sigma, beta=beta)


def level_of(score: float, stats: PopulationStats) -> Level:
    lo = stats.mean - stats.beta * stats.std
    hi = stats.mean + stats.beta * stats.std
    if score < lo:
        return Level.LOW
    if score > hi:
        return Level.HIGH
    return Level.MEDIUM


def partition_levels(scores: list[IsaScore], beta: float) -> list[AwarenessLevel]:
    """Assign each scored user a low/medium/high level (boundaries are medium)."""
    stats = population_stats(scores, beta)
    return [AwarenessLevel(s.user_id, level_of(s.score, stats)) for s in scores]


def build_measurement_vectors(
    raws: dict[str, dict[str, float]], source: DataSource
) -> list[MeasurementVector]:
    """Turn per-user raw criterion values into normalized vectors.

    ``raws`` maps user id to the criteria that user actually measured.
    Normalization runs per criterion across the users that measured it.
    Questionnaire raws are already oriented so larger means more cautious,
    so the catalog polarity only applies to behavioral sources.
    """
    per_criterion: dict[str, dict[str, float]] = {}
    for uid, vals in raws.items():
        for cid, raw in vals.items():
            if cid not in CATALOG:
                raise InputError(f"unknown criterion {cid}")
            per_criterion.setdefault(cid, {})[uid] = float(raw)

    normalized: dict[str, dict[str, float]] = {uid: {} for uid in raws}
    for cid, user_raws in per_criterion.items():
        polarity = (
            Polarity.CAUTIOUS
            if source is DataSource.QUESTIONNAIRE
            else CATALOG[cid].polarity
        )
        for uid, v in normalize_population(user_raws, polarity).items():
            normalized[uid][cid] = v

    return [
        MeasurementVector(
            user_id=uid,
            data_source=source,
            values=vals,
            coverage=frozenset(vals),
        )
        for uid, vals in sorted(normalized.items())
    ]
