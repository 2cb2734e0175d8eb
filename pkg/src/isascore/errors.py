"""Error types shared across the package.

The CLI maps these onto exit codes, so pipeline code should prefer them
over bare ValueError when the failure class matters to an operator.
"""


class InputError(ValueError):
    """An input file is missing, malformed, or fails validation."""


class ConfigError(ValueError):
    """Configuration is incomplete or inconsistent with the data."""


class DataMismatchError(ValueError):
    """Two inputs that must agree (e.g. score and outcome rosters) do not."""
