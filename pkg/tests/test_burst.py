import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isascore.agent import AppRecord, split_system_apps
from isascore.errors import InputError

DAY = 86400.0
HOUR = 3600.0


def apps_at(times):
    return [
        AppRecord(package=f"p{i}", install_time=t, source="official-store")
        for i, t in enumerate(times)
    ]


def test_burst_then_gradual_installs():
    t0 = 1_000_000.0
    times = [t0 + i * (HOUR / 40) for i in range(40)]          # 40 installs in 1h
    times += [t0 + 10 * DAY + i * 6 * DAY for i in range(30)]  # 30 over ~180 days
    timeline = split_system_apps(apps_at(times))
    assert timeline.system_cutoff == 40
    assert len(timeline.user_apps) == 30


def test_gradual_installs_only_no_burst():
    times = [i * DAY / 3 for i in range(1, 60)]  # max 3 per day
    timeline = split_system_apps(apps_at(times))
    assert timeline.system_cutoff == 0


def test_empty_timeline():
    assert split_system_apps([]).system_cutoff == 0


def test_unsorted_input_rejected():
    records = apps_at([100.0, 50.0])
    with pytest.raises(InputError, match="sorted"):
        split_system_apps(records)


def test_consecutive_bursts_absorbed_until_quiet_gap():
    t0 = 0.0
    times = [t0 + i * 60 for i in range(15)]                 # opening burst
    times += [t0 + 2 * DAY + i * 60 for i in range(12)]      # second burst, 2d later
    times += [t0 + 20 * DAY + i * 5 * DAY for i in range(5)]  # user region
    timeline = split_system_apps(apps_at(times))
    assert timeline.system_cutoff == 27


def test_small_initial_group_is_not_a_burst():
    times = [i * 60.0 for i in range(9)]  # below burst_min=10
    times += [30 * DAY + i * DAY for i in range(5)]
    assert split_system_apps(apps_at(times)).system_cutoff == 0


def test_no_quiet_gap_classifies_everything_system():
    times = [i * 60.0 for i in range(40)]
    assert split_system_apps(apps_at(times)).system_cutoff == 40


def test_appending_user_installs_never_moves_cutoff():
    t0 = 0.0
    times = [t0 + i * 60 for i in range(20)] + [t0 + 30 * DAY]
    base = split_system_apps(apps_at(times))
    extended = split_system_apps(apps_at(times + [t0 + 40 * DAY, t0 + 90 * DAY]))
    assert extended.system_cutoff == base.system_cutoff == 20


def test_idempotent_on_reconstruction():
    times = [i * 60.0 for i in range(12)] + [40 * DAY, 41 * DAY]
    first = split_system_apps(apps_at(times))
    again = split_system_apps(list(first.apps))
    assert again.system_cutoff == first.system_cutoff


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 1e6), min_size=0, max_size=50))
def test_cutoff_always_in_range(raw_times):
    times = sorted(raw_times)
    timeline = split_system_apps(apps_at(times))
    assert 0 <= timeline.system_cutoff <= len(times)
    # everything before the cutoff is system, everything after is user
    assert len(timeline.system_apps) + len(timeline.user_apps) == len(times)
