"""Mobile-agent event log pipeline: parsing, system-app filtering, and
criteria measurement from on-device telemetry."""

from .log import AgentEvent, AgentLog, EVENT_KINDS, parse_event_log
from .burst import AppRecord, InstallTimeline, split_system_apps
from .criteria import (
    PackageCategories,
    load_dangerous_permissions,
    load_package_categories,
    measure_agent_criteria,
    measure_application_criteria,
    measure_connectivity_criteria,
    measure_content_criteria,
    measure_device_criteria,
)

__all__ = [
    "AgentEvent",
    "AgentLog",
    "AppRecord",
    "EVENT_KINDS",
    "InstallTimeline",
    "PackageCategories",
    "load_dangerous_permissions",
    "load_package_categories",
    "measure_agent_criteria",
    "measure_application_criteria",
    "measure_connectivity_criteria",
    "measure_content_criteria",
    "measure_device_criteria",
    "parse_event_log",
    "split_system_apps",
]
