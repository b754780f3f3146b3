"""
Regime classification and best-bracket selection.

The regimes are asymptotic notions; the thresholds below are concrete
stand-ins, so the label is advisory. Selection is driven by bracket width alone.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import comparators
import exact_oracles
import logspace
import moments
import noncentral
from base_method import BoundMethod, register, registered_methods
from central import thm45_bracket
from config import DEFAULT_SETTINGS, Settings
from errors import ContainmentViolation
from stirling_types import (METHOD_PRECEDENCE, BoundBracket, ExactValue, Index,
                            Method, RegimeLabel)

logger = logging.getLogger(__name__)

RENNIE_DOBSON_DONOR = "rennie_dobson"


@register
class NearDiagonalBound(BoundMethod):
    method = Method.THM33

    def evaluate(self, idx: Index) -> BoundBracket:
        return noncentral.thm33_bracket(idx, self.settings.relative_slack)

    def get_description(self) -> str:
        return "m near n: S(n,m)(n-m)!/nu^(n-m) within 2e^(1/4)(2(n-m)tau/nu)^3 of 1 + C(n-m,2)tau^2/nu^2"


@register
class SmallMBound(BoundMethod):
    method = Method.THM34

    def evaluate(self, idx: Index) -> BoundBracket:
        return noncentral.thm34_bracket(idx, self.settings.relative_slack)

    def get_description(self) -> str:
        return "m small: m^n/m! times a Chebyshev lower factor, for n >= m H_m"


@register
class CentralBound(BoundMethod):
    method = Method.THM45

    def evaluate(self, idx: Index) -> BoundBracket:
        return thm45_bracket(idx, self.settings.relative_slack)

    def get_description(self) -> str:
        return "central region: tilted local limit with explicit two-term error"


@register
class TrivialBound(BoundMethod):
    method = Method.TRIVIAL_UPPER

    def evaluate(self, idx: Index) -> BoundBracket:
        return noncentral.trivial_upper(idx, self.settings.relative_slack)

    def get_description(self) -> str:
        return "1 <= S(n,m) <= m^n/m!"


@dataclass(frozen=True)
class Regime:
    label: RegimeLabel
    rationale: str


@dataclass
class DispatchReport:
    index: Index
    label: Regime
    brackets: List[BoundBracket]
    chosen: BoundBracket
    exact: Optional[ExactValue] = None
    # method -> donor of its substituted lower endpoint
    donors: Dict[Method, str] = field(default_factory=dict)

    @property
    def rationale(self) -> str:
        return self.label.rationale


def classify(idx: Index) -> Regime:
    n, m, d = idx.n, idx.m, idx.d
    if m == 1 or m == n:
        return Regime(RegimeLabel.EXACT_TRIVIAL, f"m={m} is 1 or n: S=1")
    if d <= 2:
        return Regime(RegimeLabel.NEAR_DIAGONAL, f"n-m={d} has a closed form")

    ok, report = noncentral.thm33_precondition(idx)
    if ok:
        return Regime(RegimeLabel.CASE1_HIGH_M, report)

    mh = m * moments.harmonic(m)
    if n >= mh + m:
        return Regime(RegimeLabel.CASE2_SMALL_M,
                      f"n={n} >= m*H_m + m = {float(mh + m):.6g}")

    centre = m * math.log(m)
    if abs(d - centre) <= m:
        return Regime(RegimeLabel.CASE4_BOUNDARY,
                      f"|n-m - m log m| = {abs(d - centre):.6g} <= m={m}")
    return Regime(RegimeLabel.CASE3_CENTRAL,
                  f"no boundary test fired: n-m={d}, m log m={centre:.6g} (engineering thresholds)")


def _exact_bracket(idx: Index) -> Optional[BoundBracket]:
    if idx.m == 1 or idx.m == idx.n:
        return BoundBracket.exact_value(idx, Method.EXACT_TRIVIAL, 1, "S(n,1) = S(n,n) = 1")
    if idx.d == 1:
        return BoundBracket.exact_value(idx, Method.EXACT_NM1, noncentral.exact_near_diagonal(idx),
                                        "S(n,n-1) = nu_{n-1}")
    if idx.d == 2:
        return BoundBracket.exact_value(idx, Method.EXACT_NM2, noncentral.exact_near_diagonal(idx),
                                        "S(n,n-2) = (nu_{n-2}^2 + tau_{n-2}^2)/2")
    return None


def _selection_key(bracket: BoundBracket):
    return (bracket.width, METHOD_PRECEDENCE[bracket.method])


def _substitute_lowers(idx: Index, brackets: List[BoundBracket],
                       settings: Settings) -> Tuple[List[BoundBracket], Dict[Method, str]]:
    """Replace each vacuous lower endpoint by the best certified lower from elsewhere."""
    donors = [(b.lower_log, b.method.value) for b in brackets if not b.lower_is_vacuous]
    rd = comparators.rennie_dobson_bracket(idx)
    rd_lower, _ = logspace.widen(rd.lower_log, logspace.POS_INF, settings.relative_slack)
    if logspace.is_finite(rd_lower):
        donors.append((rd_lower, RENNIE_DOBSON_DONOR))

    out, used = [], {}
    for b in brackets:
        others = [(low, name) for low, name in donors if name != b.method.value]
        if b.lower_is_vacuous and others:
            low, name = max(others, key=lambda pair: pair[0])
            b = b.with_lower(low, f"lower endpoint substituted from {name}")
            used[b.method] = name
        out.append(b)
    return out, used


def best_bracket(idx: Index, verify: bool = False,
                 settings: Settings = DEFAULT_SETTINGS) -> DispatchReport:
    """
    Evaluate every applicable estimator and return the narrowest certified bracket.

    With ``verify`` the exact value is computed and every certified bracket is
    checked to contain it; a miss raises ContainmentViolation.
    """
    regime = classify(idx)
    exact = _exact_bracket(idx)
    if exact is not None:
        report = DispatchReport(idx, regime, [exact], exact, exact=exact.exact)
    else:
        candidates = [method.evaluate(idx) for method in registered_methods(settings)]
        for b in candidates:
            if not b.preconditions_ok:
                logger.debug("S%s: %s discarded (%s)", idx, b.method.value, b.report)
        certified = [b for b in candidates if b.preconditions_ok]
        certified, donors = _substitute_lowers(idx, certified, settings)
        chosen = min(certified, key=_selection_key)
        logger.debug("S%s: chose %s of %s", idx, chosen.method.value,
                     [b.method.value for b in certified])
        report = DispatchReport(idx, regime, certified, chosen, donors=donors)

    if verify:
        if report.exact is None:
            report.exact = exact_oracles.stirling_exact(idx)
        check_containment(report.brackets, report.exact)
    return report


def check_containment(brackets: List[BoundBracket], value: ExactValue) -> None:
    value_log = logspace.exact_log(value)
    for b in brackets:
        if b.preconditions_ok and not b.contains_log(value_log):
            raise ContainmentViolation(
                f"{b.method.value} bracket [{logspace.format_log(b.lower_log)}, "
                f"{logspace.format_log(b.upper_log)}] misses log S{b.index} = "
                f"{logspace.format_log(value_log)}")


def brackets_for(idx: Index, settings: Settings = DEFAULT_SETTINGS) -> Dict[Method, BoundBracket]:
    """Every registered method's own bracket, preconditions ok or not, with no substitution."""
    return {method.method: method.evaluate(idx) for method in registered_methods(settings)}


def descriptions(settings: Settings = DEFAULT_SETTINGS) -> Dict[Method, str]:
    return {method.method: method.get_description() for method in registered_methods(settings)}
