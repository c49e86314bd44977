"""Exception hierarchy. Each class maps to one CLI exit code."""


class EnsembleError(Exception):
    exit_code = 1


class ConfigError(EnsembleError, ValueError):
    """Invalid configuration or hyperparameters."""

    exit_code = 2


class DataError(EnsembleError, ValueError):
    """Malformed, missing or incompatible input data."""

    exit_code = 3


class InvariantError(EnsembleError, RuntimeError):
    """An internal invariant was violated during computation."""

    exit_code = 4
