import math
import random

import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from isascore.catalog import DataSource
from isascore.errors import DataMismatchError, InputError
from isascore.evaluation import (
    Challenge,
    ChallengeOutcome,
    ContingencyTable,
    Result,
    chi2_sf,
    chi_square_test,
    evaluate_data_source,
    gamma_q,
    group_average_score,
    load_outcomes,
    pearson_correlation,
    success_rate,
)
from isascore.models import AttackClass
from isascore.scoring import AwarenessLevel, IsaScore, Level


def outcome(uid, result, challenge=Challenge.PHISHING, mobile=True):
    return ChallengeOutcome(uid, challenge, Result(result), mobile)


def score(uid, s):
    return IsaScore(uid, AttackClass.PHISHING, DataSource.AGENT, s, 1.0)


# --- success rate and group means --------------------------------------------

def test_success_rate_three_of_four():
    outcomes = [outcome("a", "success"), outcome("b", "success"),
                outcome("c", "success"), outcome("d", "fail")]
    levels = [AwarenessLevel(u, Level.HIGH) for u in "abcd"]
    assert success_rate(outcomes, levels, Level.HIGH) == 0.75


def test_success_rate_zero():
    outcomes = [outcome(u, "fail") for u in "abcde"]
    levels = [AwarenessLevel(u, Level.LOW) for u in "abcde"]
    assert success_rate(outcomes, levels, Level.LOW) == 0.0


def test_success_rate_empty_group_is_error():
    with pytest.raises(InputError, match="undefined success rate"):
        success_rate([], [AwarenessLevel("a", Level.LOW)], Level.LOW)


def test_group_average():
    scores = [score("a", 0.2), score("b", 0.4)]
    levels = [AwarenessLevel("a", Level.LOW), AwarenessLevel("b", Level.LOW)]
    assert group_average_score(scores, levels, Level.LOW) == pytest.approx(0.3)


def test_single_member_group_average():
    scores = [score("a", 0.7)]
    levels = [AwarenessLevel("a", Level.HIGH)]
    assert group_average_score(scores, levels, Level.HIGH) == 0.7


# --- chi-square -----------------------------------------------------------------

def T(rows):
    return ContingencyTable(tuple(tuple(r) for r in rows))


def test_uniform_table_is_exactly_independent():
    result = chi_square_test(T([[10, 10], [10, 10], [10, 10]]))
    assert result.chi2 == 0.0
    assert result.df == 2
    assert result.p_value == 1.0


def test_reference_quantile_df2():
    assert chi2_sf(5.991, 2) == pytest.approx(0.05, abs=1e-3)


def test_perfect_separation_hand_computed():
    result = chi_square_test(T([[20, 0], [10, 10], [0, 20]]))
    assert result.chi2 == pytest.approx(40.0, abs=1e-12)
    assert result.df == 2
    assert result.p_value < 1e-8


def test_low_expected_flagged():
    import warnings as w
    with w.catch_warnings():
        w.simplefilter("ignore")
        result = chi_square_test(T([[1, 2], [2, 1], [3, 3]]))
    assert result.low_expected is True


def test_zero_marginal_row_dropped_df_adjusted():
    result = chi_square_test(T([[10, 5], [0, 0], [5, 10]]))
    assert result.df == 1
    assert result.dropped_rows == (1,)


def test_zero_column_marginal_is_error():
    with pytest.raises(InputError, match="column marginal"):
        chi_square_test(T([[10, 0], [5, 0], [2, 0]]))


def test_single_populated_row_degenerates_to_p_one():
    result = chi_square_test(T([[7, 3], [0, 0], [0, 0]]))
    assert result.df == 0
    assert result.p_value == 1.0


def test_chi2_invariant_under_row_permutation():
    rows = [[12, 3], [7, 9], [2, 14]]
    base = chi_square_test(T(rows)).chi2
    for perm in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
        assert chi_square_test(T([rows[i] for i in perm])).chi2 == pytest.approx(base)


def test_p_value_matches_scipy_over_sweep():
    for df in (1, 2, 3, 5, 10, 30):
        for x in (0.0, 0.01, 0.5, 1.0, 2.5, 5.991, 11.07, 25.0, 80.0):
            mine = chi2_sf(x, df)
            ref = scipy.stats.chi2.sf(x, df)
            assert mine == pytest.approx(ref, rel=1e-9, abs=1e-300)


def test_gamma_q_extreme_tail_accuracy():
    assert gamma_q(1.0, 20.0) == pytest.approx(math.exp(-20.0), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 20), st.floats(0, 60), st.floats(0.1, 30))
def test_p_monotone_decreasing_in_chi2(df, x, dx):
    assert chi2_sf(x + dx, df) <= chi2_sf(x, df) + 1e-12


# --- pearson -------------------------------------------------------------------

def test_pearson_exact_triples():
    assert pearson_correlation([(0, 0), (1, 1), (2, 2)]) == pytest.approx(1.0, abs=1e-12)
    assert pearson_correlation([(0, 2), (1, 1), (2, 0)]) == pytest.approx(-1.0, abs=1e-12)
    assert pearson_correlation([(1, 2), (2, 1), (3, 3)]) == pytest.approx(0.5, abs=1e-12)


def test_pearson_zero_variance_error():
    with pytest.raises(InputError, match="zero variance"):
        pearson_correlation([(1, 1), (1, 2)])


def test_pearson_needs_two_points():
    with pytest.raises(InputError):
        pearson_correlation([(1, 1)])


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)),
             min_size=3, max_size=15),
    st.floats(0.1, 5), st.floats(-3, 3), st.floats(0.1, 5), st.floats(-3, 3),
)
def test_pearson_invariant_under_positive_affine(points, ax, bx, ay, by):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    if max(xs) - min(xs) < 1e-3 or max(ys) - min(ys) < 1e-3:
        return
    base = pearson_correlation(points)
    moved = pearson_correlation([(ax * x + bx, ay * y + by) for x, y in points])
    assert moved == pytest.approx(base, abs=1e-6)


# --- evaluate_data_source --------------------------------------------------------

def planted_population(n_per_level=20):
    """low always fails, medium 50/50, high always succeeds."""
    scores, levels, outcomes = [], [], []
    for i in range(n_per_level):
        for lv, base, result in (
            (Level.LOW, 0.2, "fail"),
            (Level.MEDIUM, 0.5, "success" if i % 2 == 0 else "fail"),
            (Level.HIGH, 0.8, "success"),
        ):
            uid = f"{lv.value}{i}"
            scores.append(score(uid, base + 0.001 * i))
            levels.append(AwarenessLevel(uid, lv))
            outcomes.append(outcome(uid, result))
    return scores, levels, outcomes


def test_planted_separation_report():
    scores, levels, outcomes = planted_population()
    report = evaluate_data_source(scores, levels, outcomes,
                                  AttackClass.PHISHING, DataSource.AGENT,
                                  Challenge.PHISHING)
    assert report.monotone is True
    assert report.p_value < 0.001
    assert report.pearson_r == pytest.approx(1.0, abs=0.05)
    assert report.success_rates[Level.LOW] == 0.0
    assert report.success_rates[Level.HIGH] == 1.0


def test_pc_completions_filtered_out():
    scores, levels, outcomes = planted_population()
    # flip every LOW failure to a PC-completed success: must not change rates
    flipped = [
        ChallengeOutcome(o.user_id, o.challenge, Result.SUCCESS, False)
        if o.user_id.startswith("low") else o
        for o in outcomes
    ]
    extra = [o for o in flipped if o.completed_on_mobile]
    report = evaluate_data_source(scores, levels, extra + [
        o for o in flipped if not o.completed_on_mobile
    ], AttackClass.PHISHING, DataSource.AGENT, Challenge.PHISHING)
    assert report.group_sizes[Level.LOW] == 0
    assert Level.LOW in report.excluded_levels


def test_all_medium_flags_degenerate_partition():
    scores = [score(f"u{i}", 0.5) for i in range(10)]
    levels = [AwarenessLevel(f"u{i}", Level.MEDIUM) for i in range(10)]
    outcomes = [outcome(f"u{i}", "success" if i % 2 else "fail")
                for i in range(10)]
    report = evaluate_data_source(scores, levels, outcomes,
                                  AttackClass.PHISHING, DataSource.AGENT,
                                  Challenge.PHISHING)
    assert report.monotone is None
    assert any("degenerate" in w for w in report.warnings)


def test_uniform_outcomes_not_significant():
    rng = random.Random(42)
    scores, levels, outcomes = [], [], []
    for i in range(120):
        lv = (Level.LOW, Level.MEDIUM, Level.HIGH)[i % 3]
        uid = f"u{i}"
        scores.append(score(uid, 0.5))
        levels.append(AwarenessLevel(uid, lv))
        outcomes.append(outcome(uid, "success" if rng.random() < 0.5 else "fail"))
    report = evaluate_data_source(scores, levels, outcomes,
                                  AttackClass.PHISHING, DataSource.AGENT,
                                  Challenge.PHISHING)
    assert report.p_value > 0.05


# --- outcome file I/O -------------------------------------------------------------

def test_load_outcomes_round_trip(tmp_path):
    path = tmp_path / "outcomes.csv"
    path.write_text(
        "uid,challenge,result,mobile\n"
        "u1,phishing,success,1\n"
        "u1,spam,fail,0\n"
        "u2,certificate,fail,true\n"
    )
    outcomes = load_outcomes(path)
    assert len(outcomes) == 3
    assert outcomes[0].completed_on_mobile is True
    assert outcomes[1].completed_on_mobile is False
    assert outcomes[2].challenge is Challenge.CERTIFICATE


def test_duplicate_outcome_rejected(tmp_path):
    path = tmp_path / "outcomes.csv"
    path.write_text("u1,phishing,success,1\nu1,phishing,fail,1\n")
    with pytest.raises(DataMismatchError, match="duplicate"):
        load_outcomes(path)


def test_unknown_challenge_rejected(tmp_path):
    path = tmp_path / "outcomes.csv"
    path.write_text("u1,bribery,success,1\n")
    with pytest.raises(InputError):
        load_outcomes(path)
