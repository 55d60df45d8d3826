"""Shared exception types."""


class AnnealkitError(Exception):
    """Base class for toolkit-specific failures."""


class ConfigError(AnnealkitError):
    """Invalid configuration value or malformed config file."""


class NonFiniteObjectiveError(AnnealkitError):
    """An objective returned NaN or infinity.

    Carries the offending point so the caller can tell whether the
    function formula is wrong or an intermediate overflowed.
    """

    def __init__(self, name, x):
        super().__init__(f"objective {name!r} returned a non-finite value at x={x!r}")
        self.problem_name = name
        self.x = x
