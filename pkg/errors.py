"""Exception hierarchy shared by every module."""


class StirlingError(Exception):
    """Base class for all errors raised by this package."""


class InvalidIndexError(StirlingError, ValueError):
    """The pair (n, m) is outside 1 <= m <= n, or violates an operation's domain."""


class PreconditionError(StirlingError):
    """A bound's hypothesis does not hold for the requested index."""


class OrderCapExceededError(StirlingError):
    """n - m is larger than the configured exact-order cap."""


class PowerTooLargeError(StirlingError):
    """Monte-Carlo moment estimation requested for a power above the cap."""


class ConvergenceError(StirlingError):
    """A bisection did not reach its tolerance within the step budget."""


class QuadratureError(StirlingError):
    """Adaptive quadrature stopped at its subdivision cap."""


class IntegralityError(StirlingError, ArithmeticError):
    """An exact route produced a non-integer; this is always a bug."""


class ContainmentViolation(StirlingError, AssertionError):
    """A certified bracket failed to contain the exact value; always a bug."""


class ConfigError(StirlingError):
    """Malformed configuration file or environment override."""
