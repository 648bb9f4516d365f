"""Exception types shared across the package.

The CLI maps these onto process exit codes: config problems -> 1,
IO problems -> 2 (plain OSError), internal consistency failures -> 3.
"""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class InsufficientGridError(InvalidInputError):
    """Sample grid too short for the requested frequency range."""


class UndefinedMetricError(ValueError):
    """A metric has no defined value for the given data (e.g. constant truth)."""


class InternalConsistencyError(RuntimeError):
    """A sanity check that should hold by construction failed (e.g. aliasing)."""


class ConfigError(ValueError):
    """Experiment configuration is malformed or inconsistent."""
