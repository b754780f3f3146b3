"""Core value types: the index (n, m), method tags and certified brackets."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Optional

import logspace
from errors import InvalidIndexError

# S(n, m) as a plain Python int (arbitrary precision)
ExactValue = int


class Method(Enum):
    EXACT_TRIVIAL = "exact_trivial"
    EXACT_NM1 = "exact_nm1"
    EXACT_NM2 = "exact_nm2"
    EXPANSION = "expansion"
    THM33 = "thm33"
    THM34 = "thm34"
    THM45 = "thm45"
    TRIVIAL_UPPER = "trivial_upper"

    @property
    def is_exact(self) -> bool:
        return self in (Method.EXACT_TRIVIAL, Method.EXACT_NM1,
                        Method.EXACT_NM2, Method.EXPANSION)


# tie-break order used when two brackets have the same width
METHOD_PRECEDENCE = {
    Method.EXACT_TRIVIAL: 0,
    Method.EXACT_NM1: 0,
    Method.EXACT_NM2: 0,
    Method.EXPANSION: 0,
    Method.THM33: 1,
    Method.THM34: 2,
    Method.THM45: 3,
    Method.TRIVIAL_UPPER: 4,
}


class RegimeLabel(Enum):
    EXACT_TRIVIAL = "exact_trivial"
    NEAR_DIAGONAL = "near_diagonal"
    CASE1_HIGH_M = "case1_high_m"
    CASE2_SMALL_M = "case2_small_m"
    CASE3_CENTRAL = "case3_central"
    CASE4_BOUNDARY = "case4_boundary"


@dataclass(frozen=True, order=True)
class Index:
    """Argument (n, m) of S(n, m), validated on construction."""
    n: int
    m: int

    def __post_init__(self):
        if isinstance(self.n, bool) or isinstance(self.m, bool):
            raise InvalidIndexError("n and m must be integers, not booleans")
        if not isinstance(self.n, int) or not isinstance(self.m, int):
            raise InvalidIndexError(f"n and m must be integers, got ({self.n!r}, {self.m!r})")
        if self.n < 1:
            raise InvalidIndexError(f"n must be >= 1, got n={self.n}")
        if self.m < 1 or self.m > self.n:
            raise InvalidIndexError(f"need 1 <= m <= n, got (n={self.n}, m={self.m})")

    @property
    def d(self) -> int:
        """Displacement n - m."""
        return self.n - self.m

    def __str__(self) -> str:
        return f"({self.n},{self.m})"


@dataclass(frozen=True)
class BoundBracket:
    """
    Two-sided bracket in log space.

    When ``preconditions_ok`` is true, exp(lower_log) <= S(n, m) <= exp(upper_log).
    ``lower_log`` may be -inf (vacuous lower bound); ``upper_log`` may be +inf
    only for a failed precondition.
    """
    index: Index
    method: Method
    lower_log: Any
    upper_log: Any
    preconditions_ok: bool
    report: str = ""
    exact: Optional[int] = None
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def width(self):
        """upper_log - lower_log, +inf when either side is unbounded."""
        if not (logspace.is_finite(self.lower_log) and logspace.is_finite(self.upper_log)):
            return logspace.POS_INF
        return self.upper_log - self.lower_log

    @property
    def lower_is_vacuous(self) -> bool:
        return not logspace.is_finite(self.lower_log)

    def contains_log(self, value_log) -> bool:
        return self.lower_log <= value_log <= self.upper_log

    def with_lower(self, lower_log, note: str) -> "BoundBracket":
        report = f"{self.report}; {note}" if self.report else note
        return replace(self, lower_log=lower_log, report=report)

    @classmethod
    def failed(cls, index: Index, method: Method, report: str) -> "BoundBracket":
        return cls(index, method, logspace.NEG_INF, logspace.POS_INF, False, report)

    @classmethod
    def exact_value(cls, index: Index, method: Method, value: int, report: str = "") -> "BoundBracket":
        log_value = logspace.exact_log(value)
        return cls(index, method, log_value, log_value, True, report, exact=value)
