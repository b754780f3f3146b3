"""Bisection for increasing scalar maps."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

from errors import ConvergenceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BisectionResult:
    x: float
    value: float
    steps: int


def bisect_increasing(func: Callable[[float], float], target: float,
                      lo: float, hi: float, *,
                      f_tol: Optional[float] = None,
                      x_rtol: Optional[float] = None,
                      max_steps: int = 200) -> BisectionResult:
    """
    Solve func(x) = target for a strictly increasing func on [lo, hi].

    Stops as soon as |func(x) - target| <= f_tol, or the bracket is narrower
    than x_rtol * hi. At least one of the two tolerances must be given.

    Args:
        func: strictly increasing map.
        target: value to hit; func(lo) <= target <= func(hi) is required.
        lo, hi: initial bracket.
        f_tol: absolute tolerance on the residual.
        x_rtol: relative tolerance on the bracket width.
        max_steps: bisection budget.

    Returns:
        BisectionResult with the accepted point, its residual value and step count.
    """
    if f_tol is None and x_rtol is None:
        raise ValueError("bisect_increasing needs f_tol or x_rtol")

    for step in range(1, max_steps + 1):
        mid = 0.5 * (lo + hi)
        value = func(mid)

        if f_tol is not None and abs(value - target) <= f_tol:
            return BisectionResult(mid, value, step)
        if value < target:
            lo = mid
        else:
            hi = mid
        if x_rtol is not None and hi - lo <= x_rtol * abs(hi):
            return BisectionResult(mid, value, step)
        nxt = 0.5 * (lo + hi)
        if nxt == lo or nxt == hi:
            # adjacent floats: no further progress possible
            break

    logger.debug("bisection stopped at [%r, %r] after %d steps", lo, hi, step)
    raise ConvergenceError(
        f"bisection did not converge in {max_steps} steps (bracket [{lo!r}, {hi!r}])")
