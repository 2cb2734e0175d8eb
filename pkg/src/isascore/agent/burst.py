"""System-app filtering via the installation-burst heuristic.

Vendor-preinstalled apps show up as a dense burst of installs at the start
of a device's timeline, often months before the first app the user chose.
The filter walks the time-sorted install list: if the timeline opens with a
burst (at least ``burst_min`` installs inside ``burst_window``), everything
up to the first quiet gap of ``quiet_gap`` or more is classified as system;
the rest is user-installed.  Without an opening burst nothing is filtered.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError

DEFAULT_BURST_MIN = 10
DEFAULT_BURST_WINDOW = 24 * 3600.0
DEFAULT_QUIET_GAP = 7 * 24 * 3600.0


@dataclass(frozen=True)
class AppRecord:
    package: str
    install_time: float
    source: str
    permissions: tuple[str, ...] = ()
    rating: float | None = None
    downloads: int | None = None
    requires_root: bool = False
    av_flagged: bool = False
    up_to_date: bool | None = None

    @classmethod
    def from_payload(cls, obj: dict) -> "AppRecord":
        return cls(
            package=obj["package"],
            install_time=float(obj["install_time"]),
            source=obj["source"],
            permissions=tuple(obj.get("permissions") or ()),
            rating=obj.get("rating"),
            downloads=obj.get("downloads"),
            requires_root=bool(obj.get("requires_root")),
            av_flagged=bool(obj.get("av_flagged")),
            up_to_date=obj.get("up_to_date"),
        )


@dataclass(frozen=True)
class InstallTimeline:
    apps: tuple[AppRecord, ...]
    system_cutoff: int

    @property
    def system_apps(self) -> tuple[AppRecord, ...]:
        return self.apps[: self.system_cutoff]

    @property
    def user_apps(self) -> tuple[AppRecord, ...]:
        return self.apps[self.system_cutoff:]


def split_system_apps(
    apps,
    burst_min: int = DEFAULT_BURST_MIN,
    burst_window: float = DEFAULT_BURST_WINDOW,
    quiet_gap: float = DEFAULT_QUIET_GAP,
) -> InstallTimeline:
    """Partition a time-sorted install list into system and user regions."""
    apps = tuple(apps)
    if burst_min < 1 or burst_window <= 0 or quiet_gap <= 0:
        raise InputError("burst parameters must be positive")
    times = [a.install_time for a in apps]
    if any(t1 > t2 for t1, t2 in zip(times, times[1:])):
        raise InputError("install records must be sorted by install_time")
    if not apps:
        return InstallTimeline(apps, 0)

    opening = sum(1 for t in times if t <= times[0] + burst_window)
    if opening < burst_min:
        return InstallTimeline(apps, 0)

    cutoff = len(apps)
    for i in range(len(apps) - 1):
        if times[i + 1] - times[i] >= quiet_gap:
            cutoff = i + 1
            break
    return InstallTimeline(apps, cutoff)
