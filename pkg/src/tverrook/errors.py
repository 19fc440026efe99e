"""Shared exception types.

InputError maps to CLI exit code 3, ResourceLimitError to exit code 4.
"""


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class ResourceLimitError(RuntimeError):
    """A desk-scale guard was exceeded; raise rather than grind forever."""
