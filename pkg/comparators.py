"""
Classical reference estimates, used to put the certified brackets in context.

Only the Rennie-Dobson bracket is certified; the Jordan and Moser-Wyman values
are point estimates.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

import logspace
from bisection import bisect_increasing
from config import DEFAULT_SETTINGS
from errors import InvalidIndexError
from stirling_types import Index

logger = logging.getLogger(__name__)

ctx = logspace.ctx

# below this R the left side of the R-equation is replaced by its series
SERIES_GUARD = 1e-6


class ComparatorMethod(Enum):
    JORDAN_SMALL_M = "jordan_small_m"
    JORDAN_LARGE_M = "jordan_large_m"
    RENNIE_DOBSON = "rennie_dobson"
    MOSER_WYMAN = "moser_wyman"


@dataclass(frozen=True)
class ComparatorValue:
    method: ComparatorMethod
    value_log: object = None          # point estimate
    lower_log: object = None          # bracket (certified methods only)
    upper_log: object = None
    certified: bool = False
    lower_exact: Optional[Fraction] = None
    upper_exact: Optional[Fraction] = None
    detail: str = ""


def jordan_estimates(idx: Index) -> Tuple[ComparatorValue, ComparatorValue]:
    """
    m^n/m! (small m) and n^{2d}/(2^d d!) at displacement d = n - m (m near n).
    """
    n, m, d = idx.n, idx.m, idx.d
    small = n * logspace.log_int(m) - logspace.log_factorial(m)
    large = (2 * d * logspace.log_int(n) - d * ctx.log(2)
             - logspace.log_factorial(d))
    return (ComparatorValue(ComparatorMethod.JORDAN_SMALL_M, value_log=small),
            ComparatorValue(ComparatorMethod.JORDAN_LARGE_M, value_log=large,
                            detail=f"d={d}"))


def rennie_dobson_bracket(idx: Index) -> ComparatorValue:
    """(m^2 + m + 2) m^{n-m-1}/2 - 1 <= S(n, m) <= C(n, m) m^{n-m} / 2, for m <= n - 1."""
    n, m = idx.n, idx.m
    if m >= n:
        raise InvalidIndexError(f"Rennie-Dobson bracket needs m <= n-1, got (n={n}, m={m})")
    lower = Fraction((m * m + m + 2) * m ** (n - m - 1), 2) - 1
    upper = Fraction(math.comb(n, m) * m ** (n - m), 2)
    return ComparatorValue(ComparatorMethod.RENNIE_DOBSON,
                           lower_log=logspace.log_fraction(lower),
                           upper_log=logspace.log_fraction(upper),
                           certified=True, lower_exact=lower, upper_exact=upper)


def r_equation_lhs(r: float) -> float:
    """R / (1 - e^{-R}), increasing from 1 at R -> 0+."""
    if r < SERIES_GUARD:
        return 1.0 + r / 2 + r * r / 12
    return r / -math.expm1(-r)


def solve_r_equation(ratio: float, rtol: float = DEFAULT_SETTINGS.root_rtol) -> float:
    """Root of R / (1 - e^{-R}) = ratio for ratio > 1, bracketed in (0, ratio]."""
    if ratio <= 1:
        raise ValueError(f"R-equation needs n/m > 1, got {ratio}")
    result = bisect_increasing(r_equation_lhs, ratio, 0.0, float(ratio),
                               x_rtol=rtol, max_steps=400)
    return result.x


def moser_wyman_leading(idx: Index) -> ComparatorValue:
    """log of n! (e^R - 1)^m / (2 R^n m! sqrt(pi m R H)), H = e^R(e^R - 1 - R) / (2 (e^R - 1)^2)."""
    n, m = idx.n, idx.m
    if m >= n:
        raise InvalidIndexError(f"Moser-Wyman estimate needs m < n, got (n={n}, m={m})")
    r = solve_r_equation(n / m)
    R = ctx.mpf(r)
    em1 = ctx.expm1(R)
    h = ctx.exp(R) * (em1 - R) / (2 * em1 ** 2)
    value = (logspace.log_factorial(n) + m * ctx.log(em1) - ctx.log(2)
             - n * ctx.log(R) - logspace.log_factorial(m)
             - ctx.log(ctx.pi * m * R * h) / 2)
    logger.debug("Moser-Wyman S%s: R=%r, H=%s", idx, r, ctx.nstr(h, 8))
    return ComparatorValue(ComparatorMethod.MOSER_WYMAN, value_log=value,
                           detail=f"R={r:.12g}")
