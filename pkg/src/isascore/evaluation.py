"""Validation statistics: challenge outcomes versus awareness levels.

For one (attack class, data source) pairing this module builds the
level-by-outcome contingency table, runs the Pearson chi-square independence
test (p-value computed in-repo via the regularized upper incomplete gamma),
and summarizes the per-level success rates and average scores with their
Pearson correlation and the monotonicity check
sr(low) < sr(medium) < sr(high).
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .catalog import DataSource
from .errors import DataMismatchError, InputError
from .models import AttackClass
from .scoring import AwarenessLevel, IsaScore, Level

LEVELS = (Level.LOW, Level.MEDIUM, Level.HIGH)


class Challenge(str, Enum):
    PHISHING = "phishing"
    SPAM = "spam"
    PERMISSIONS = "permissions"
    CERTIFICATE = "certificate"


class Result(str, Enum):
    SUCCESS = "success"
    FAIL = "fail"


@dataclass(frozen=True)
class ChallengeOutcome:
    user_id: str
    challenge: Challenge
    result: Result
    completed_on_mobile: bool


@dataclass(frozen=True)
class ContingencyTable:
    """3x2 counts: rows low/medium/high, columns success/fail."""

    counts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.counts) != 3 or any(len(r) != 2 for r in self.counts):
            raise InputError("contingency table must be 3x2")
        if any(c < 0 for row in self.counts for c in row):
            raise InputError("contingency table counts must be nonnegative")

    @property
    def total(self) -> int:
        return sum(c for row in self.counts for c in row)


# --- incomplete gamma machinery (upper regularized Q) -----------------------

_GAMMA_EPS = 1e-13
_GAMMA_ITMAX = 10_000


def _gamma_p_series(a: float, x: float) -> float:
    """Lower regularized P(a, x) by series expansion (x < a + 1)."""
    term = 1.0 / a
    total = term
    n = a
    for _ in range(_GAMMA_ITMAX):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError("incomplete gamma series failed to converge")


def _gamma_q_cf(a: float, x: float) -> float:
    """Upper regularized Q(a, x) by Lentz continued fraction (x >= a + 1)."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_ITMAX):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError("incomplete gamma continued fraction failed to converge")


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) to ~1e-12 relative accuracy."""
    if a <= 0:
        raise ValueError("gamma_q requires a > 0")
    if x < 0:
        raise ValueError("gamma_q requires x >= 0")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return min(max(1.0 - _gamma_p_series(a, x), 0.0), 1.0)
    return min(max(_gamma_q_cf(a, x), 0.0), 1.0)


def chi2_sf(chi2: float, df: int) -> float:
    """Upper-tail probability of the chi-square distribution."""
    if df <= 0:
        return 1.0
    return gamma_q(df / 2.0, chi2 / 2.0)


# --- tests ------------------------------------------------------------------

@dataclass(frozen=True)
class ChiSquareResult:
    chi2: float
    df: int
    p_value: float
    low_expected: bool = False
    dropped_rows: tuple[int, ...] = ()


def chi_square_test(table: ContingencyTable) -> ChiSquareResult:
    """Pearson chi-square independence test on the level/outcome table.

    Rows with a zero marginal are dropped (degrees of freedom adjusted);
    a zero column marginal afterwards makes the test undefined.  Expected
    counts below 5 are reported through ``low_expected`` and a warning.
    """
    rows = [r for r in table.counts]
    dropped = tuple(i for i, r in enumerate(rows) if sum(r) == 0)
    rows = [r for i, r in enumerate(rows) if i not in dropped]
    if not rows:
        raise InputError("contingency table is empty")
    col_totals = [sum(r[j] for r in rows) for j in (0, 1)]
    if any(t == 0 for t in col_totals):
        if len(rows) > 1:
            raise InputError("zero expected count: a column marginal is zero")
        # single row: no independence structure left to test
        return ChiSquareResult(0.0, 0, 1.0, low_expected=True, dropped_rows=dropped)
    n = sum(col_totals)
    chi2 = 0.0
    low_expected = False
    for r in rows:
        row_total = sum(r)
        for j in (0, 1):
            expected = row_total * col_totals[j] / n
            if expected < 5:
                low_expected = True
            chi2 += (r[j] - expected) ** 2 / expected
    df = (len(rows) - 1) * (2 - 1)
    if low_expected:
        warnings.warn("chi-square expected count below 5", stacklevel=2)
    return ChiSquareResult(chi2, df, chi2_sf(chi2, df), low_expected, dropped)


def pearson_correlation(points) -> float:
    """Sample Pearson correlation coefficient of (x, y) pairs."""
    pts = list(points)
    if len(pts) < 2:
        raise InputError("pearson correlation needs at least two points")
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    sxy = sum((x - mx) * (y - my) for x, y in pts)
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    syy = sum((y - my) ** 2 for _, y in pts)
    if sxx == 0 or syy == 0:
        raise InputError("undefined correlation: zero variance")
    return sxy / math.sqrt(sxx * syy)


def success_rate(outcomes, levels, level: Level) -> float:
    """Fraction of level members that mitigated the challenge."""
    level_users = {al.user_id for al in levels if al.level is level}
    group = [o for o in outcomes if o.user_id in level_users]
    if not group:
        raise InputError(f"undefined success rate: no outcomes at level {level.value}")
    return sum(1 for o in group if o.result is Result.SUCCESS) / len(group)


def group_average_score(scores, levels, level: Level) -> float:
    level_users = {al.user_id for al in levels if al.level is level}
    group = [s.score for s in scores if s.user_id in level_users]
    if not group:
        raise InputError(f"empty level group {level.value}")
    return sum(group) / len(group)


@dataclass
class EvaluationReport:
    attack_class: AttackClass
    data_source: DataSource
    challenge: Challenge
    group_sizes: dict[Level, int]
    success_rates: dict[Level, float | None]
    avg_scores: dict[Level, float | None]
    chi2: float
    df: int
    p_value: float
    pearson_r: float | None
    monotone: bool | None
    excluded_levels: tuple[Level, ...] = ()
    warnings: tuple[str, ...] = ()


def evaluate_data_source(
    scores: list[IsaScore],
    levels: list[AwarenessLevel],
    outcomes: list[ChallengeOutcome],
    attack_class: AttackClass,
    data_source: DataSource,
    challenge: Challenge,
) -> EvaluationReport:
    """Full report for one (class, source, challenge) combination.

    Users are joined pairwise: only those with a score, a level, and a
    mobile-completed outcome enter the table.  Empty levels are excluded
    with the degrees of freedom adjusted, and a degenerate partition
    (fewer than two populated levels) is flagged rather than an error.
    """
    level_by_user = {al.user_id: al.level for al in levels}
    usable = [
        o for o in outcomes
        if o.challenge is challenge and o.completed_on_mobile
        and o.user_id in level_by_user
    ]
    notes = []
    counts = []
    for lv in LEVELS:
        members = [o for o in usable if level_by_user[o.user_id] is lv]
        wins = sum(1 for o in members if o.result is Result.SUCCESS)
        counts.append((wins, len(members) - wins))
    table = ContingencyTable(tuple(tuple(r) for r in counts))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        chi = chi_square_test(table)
    if chi.low_expected:
        notes.append("expected count below 5")

    group_sizes = {}
    rates: dict[Level, float | None] = {}
    means: dict[Level, float | None] = {}
    for lv in LEVELS:
        members = [o for o in usable if level_by_user[o.user_id] is lv]
        group_sizes[lv] = len(members)
        if members:
            rates[lv] = success_rate(members, levels, lv)
            means[lv] = group_average_score(scores, levels, lv)
        else:
            rates[lv] = None
            means[lv] = None
    excluded = tuple(lv for lv in LEVELS if group_sizes[lv] == 0)
    if excluded:
        notes.append("empty levels excluded: " + ",".join(lv.value for lv in excluded))

    pairs = [(means[lv], rates[lv]) for lv in LEVELS if rates[lv] is not None]
    r = None
    if len(pairs) >= 2:
        try:
            r = pearson_correlation(pairs)
        except InputError as exc:
            notes.append(str(exc))
    else:
        notes.append("degenerate partition: fewer than two populated levels")

    monotone = None
    if all(rates[lv] is not None for lv in LEVELS):
        monotone = rates[Level.LOW] < rates[Level.MEDIUM] < rates[Level.HIGH]

    return EvaluationReport(
        attack_class=attack_class,
        data_source=data_source,
        challenge=challenge,
        group_sizes=group_sizes,
        success_rates=rates,
        avg_scores=means,
        chi2=chi.chi2,
        df=chi.df,
        p_value=chi.p_value,
        pearson_r=r,
        monotone=monotone,
        excluded_levels=excluded,
        warnings=tuple(notes),
    )


# --- outcome and report file I/O ---------------------------------------------

def load_outcomes(path) -> list[ChallengeOutcome]:
    """CSV ``uid,challenge,result,mobile``; one row per (user, challenge)."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"outcomes file not found: {path}")
    outcomes = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, 1):
            if not row or row[0].strip().startswith("#"):
                continue
            if row[0].strip().lower() == "uid":
                continue
            if len(row) != 4:
                raise InputError(f"{path}:{lineno}: expected 'uid,challenge,result,mobile'")
            uid, challenge, result, mobile = (c.strip() for c in row)
            try:
                parsed = ChallengeOutcome(
                    user_id=uid,
                    challenge=Challenge(challenge),
                    result=Result(result),
                    completed_on_mobile=mobile.lower() in ("1", "true", "yes"),
                )
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
            key = (uid, parsed.challenge)
            if key in seen:
                raise DataMismatchError(
                    f"{path}:{lineno}: duplicate outcome for {uid}/{challenge}"
                )
            seen.add(key)
            outcomes.append(parsed)
    return outcomes


def write_report_csv(reports: list[EvaluationReport], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "challenge", "attack_class", "data_source", "level", "n",
            "success_rate", "avg_score", "chi2", "df", "p_value",
            "pearson_r", "monotone",
        ])
        for rep in reports:
            for lv in LEVELS:
                writer.writerow([
                    rep.challenge.value, rep.attack_class.value,
                    rep.data_source.value, lv.value, rep.group_sizes[lv],
                    _fmt(rep.success_rates[lv]), _fmt(rep.avg_scores[lv]),
                    f"{rep.chi2:.6g}", rep.df, f"{rep.p_value:.6g}",
                    _fmt(rep.pearson_r), _fmt(rep.monotone),
                ])


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    return f"{v:.6g}"


def report_to_dict(rep: EvaluationReport) -> dict:
    return {
        "challenge": rep.challenge.value,
        "attack_class": rep.attack_class.value,
        "data_source": rep.data_source.value,
        "levels": {
            lv.value: {
                "n": rep.group_sizes[lv],
                "success_rate": rep.success_rates[lv],
                "avg_score": rep.avg_scores[lv],
            }
            for lv in LEVELS
        },
        "chi2": rep.chi2,
        "df": rep.df,
        "p_value": rep.p_value,
        "pearson_r": rep.pearson_r,
        "monotone": rep.monotone,
        "excluded_levels": [lv.value for lv in rep.excluded_levels],
        "warnings": list(rep.warnings),
    }


def write_report_json(reports: list[EvaluationReport], path) -> None:
    Path(path).write_text(
        json.dumps([report_to_dict(r) for r in reports], indent=2) + "\n",
        encoding="utf-8",
    )
