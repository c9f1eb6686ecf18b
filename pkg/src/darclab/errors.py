"""Shared exception types.

CLI exit codes map onto these: ConfigError -> 1, NumericalError -> 2.
Property-suite violations are counted, not raised (exit 3 in the CLI).
"""


class ConfigError(ValueError):
    """Invalid run configuration: unknown algorithm/environment name or bad field value."""


class NumericalError(RuntimeError):
    """A non-finite value appeared where the update contract requires finite numbers."""


class UnsupportedError(RuntimeError):
    """The requested diagnostic is not defined for this agent or environment."""
