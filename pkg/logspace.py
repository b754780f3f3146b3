"""
Extended-precision natural logarithms of exact integers and rationals.

All bracket endpoints are natural logs held as mpmath numbers from one private
context (``ctx``). Its precision is fixed at import and never mutated, so the
helpers are safe to call from several threads. Routines that adjust precision
internally (loggamma) run on a per-call context instead of ``ctx``.
"""

import math
from fractions import Fraction
from typing import Tuple, Union

from mpmath import MPContext

from config import DEFAULT_SETTINGS

ctx = MPContext()
ctx.prec = DEFAULT_SETTINGS.working_precision

NEG_INF = ctx.ninf
POS_INF = ctx.inf

# exact factorials are logged directly up to this n; loggamma beyond
EXACT_FACTORIAL_LIMIT = 10_000

Rational = Union[int, Fraction]


def mpf(x):
    return ctx.mpf(x)


def log_int(value: int):
    """log of a positive integer, rounded once at working precision."""
    if value <= 0:
        return NEG_INF
    return ctx.log(ctx.mpf(value))


def log_fraction(value: Rational):
    """log of an exact rational; non-positive values map to -inf."""
    value = Fraction(value)
    if value <= 0:
        return NEG_INF
    return log_int(value.numerator) - log_int(value.denominator)


def exact_log(value: int):
    """Log of an exact Stirling value, the reference every containment check uses."""
    return log_int(value)


def log_factorial(n: int):
    if n < 0:
        raise ValueError(f"log_factorial needs n >= 0, got {n}")
    if n <= EXACT_FACTORIAL_LIMIT:
        return log_int(math.factorial(n))
    # loggamma raises its context's precision while it runs, so it gets a context of its own
    local = MPContext()
    local.prec = ctx.prec
    return ctx.mpf(local.loggamma(n + 1))


def is_finite(x) -> bool:
    return bool(ctx.isfinite(x))


def widen(lower_log, upper_log, slack: float = DEFAULT_SETTINGS.relative_slack) -> Tuple:
    """Shrink the lower endpoint and grow the upper one by a relative slack."""
    if is_finite(lower_log):
        lower_log = lower_log + ctx.log1p(-ctx.mpf(slack))
    if is_finite(upper_log):
        upper_log = upper_log + ctx.log1p(ctx.mpf(slack))
    return lower_log, upper_log


def format_log(x) -> str:
    """Text form of a log endpoint; parsing it back with ``mpf`` is exact at working precision."""
    if ctx.isinf(x):
        return "-inf" if x < 0 else "inf"
    return ctx.nstr(x, 40, strip_zeros=False)


def from_rational(value: Rational):
    """Nearest working-precision number to an exact rational."""
    value = Fraction(value)
    return ctx.mpf(value.numerator) / value.denominator
