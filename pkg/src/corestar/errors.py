"""Shared exception types, mapped to CLI exit codes."""


class ValidationError(ValueError):
    """Bad configuration or failed structural precondition (exit code 3)."""


class CostLimitExceeded(RuntimeError):
    """Requested computation exceeds configured cost limits (exit code 4)."""
