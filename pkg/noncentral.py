"""
Certified brackets for m near n and for m small relative to n.

Near the diagonal S(n, m) (n-m)! / nu^{n-m} is 1 + C(n-m, 2) tau^2/nu^2 up to a
cubic remainder; for small m, S(n, m) m!/m^n is a CDF value, bounded above by 1
and below by a Chebyshev tail estimate.
"""

import logging
import math
from fractions import Fraction
from typing import Tuple

import logspace
import moments
from config import DEFAULT_SETTINGS
from errors import IntegralityError, InvalidIndexError, OrderCapExceededError
from stirling_types import BoundBracket, ExactValue, Index, Method

logger = logging.getLogger(__name__)

ctx = logspace.ctx

# e^{1/4} = 1.28402541668774148407..., rounded up
E_QUARTER_UP = Fraction("1.2840254166877415")


def thm33_precondition(idx: Index) -> Tuple[bool, str]:
    """3 <= n-m and 2 (n-m) tau_m <= nu_m, decided exactly via 4 d^2 tau^2 <= nu^2."""
    d = idx.d
    nu, tau_sq = moments.mean_var(idx.m)
    if d < 3:
        return False, f"thm33 requires n-m >= 3, got n-m={d}"
    if 4 * d * d * tau_sq > nu * nu:
        return False, (f"thm33 requires n-m <= nu_m/(2*tau_m): "
                       f"4*{d}^2*{tau_sq} > {nu}^2")
    return True, f"thm33: 3 <= n-m={d} <= nu_m/(2*tau_m) holds"


def thm33_terms(idx: Index):
    """
    Center C (exact) and radius R (working precision, rounded outward by the
    slack later) of the near-diagonal estimate, regardless of the precondition.
    """
    d = idx.d
    nu, tau_sq = moments.mean_var(idx.m)
    center = 1 + Fraction(math.comb(d, 2)) * tau_sq / (nu * nu)
    tau = ctx.sqrt(logspace.from_rational(tau_sq))
    ratio = 2 * d * tau / logspace.from_rational(nu)
    radius = 2 * logspace.from_rational(E_QUARTER_UP) * ratio ** 3
    return center, radius


def thm33_bracket(idx: Index, slack: float = DEFAULT_SETTINGS.relative_slack) -> BoundBracket:
    ok, report = thm33_precondition(idx)
    if not ok:
        return BoundBracket.failed(idx, Method.THM33, report)

    d = idx.d
    center, radius = thm33_terms(idx)
    nu, _ = moments.mean_var(idx.m)
    base_log = d * logspace.log_fraction(nu) - logspace.log_factorial(d)

    # radius is inflated first so the certified lower side stays below the true one
    radius = radius * (1 + ctx.mpf(slack))
    c = logspace.from_rational(center)
    upper_log = base_log + ctx.log(c + radius)
    if c - radius > 0:
        lower_log = base_log + ctx.log(c - radius)
    else:
        lower_log = logspace.NEG_INF
        report += "; lower bound vacuous (C - R <= 0)"
    lower_log, upper_log = logspace.widen(lower_log, upper_log, slack)
    return BoundBracket(idx, Method.THM33, lower_log, upper_log, True, report,
                        extras={"center": center, "radius": radius})


def exact_near_diagonal(idx: Index) -> ExactValue:
    """S(n, n-1) = nu_{n-1} and S(n, n-2) = (nu_{n-2}^2 + tau_{n-2}^2) / 2."""
    d = idx.d
    if d not in (1, 2):
        raise InvalidIndexError(f"exact_near_diagonal needs n-m in {{1,2}}, got n-m={d}")
    nu, tau_sq = moments.mean_var(idx.m)
    value = nu if d == 1 else (nu * nu + tau_sq) / 2
    if value.denominator != 1:
        raise IntegralityError(f"near-diagonal formula gave non-integer {value} for S{idx}")
    return value.numerator


def expansion_exact(idx: Index, order_cap: int = DEFAULT_SETTINGS.expansion_order_cap) -> ExactValue:
    """
    S(n, m) = nu^d/d! * sum_j C(d, j) mu_j / nu^j, mu_j the central moments of S_m.

    Terms j = 0, 1, 2 are 1, 0 and C(d, 2) tau^2/nu^2.
    """
    d = idx.d
    if d > order_cap:
        raise OrderCapExceededError(f"n-m={d} exceeds the expansion order cap {order_cap}")
    if d == 0:
        return 1
    nu, _ = moments.mean_var(idx.m)
    mu = moments.central_moments(moments.cumulants(idx.m, d), d)
    series = sum((Fraction(math.comb(d, j) * mu[j]) / nu ** j for j in range(d + 1)), Fraction(0))
    value = nu ** d / math.factorial(d) * series
    if value.denominator != 1:
        raise IntegralityError(f"expansion gave non-integer {value} for S{idx}")
    return value.numerator


def thm34_precondition(idx: Index) -> Tuple[bool, str]:
    m = idx.m
    if m < 2:
        return False, f"thm34 lower bound requires m >= 2, got m={m}"
    mh = m * moments.harmonic(m)
    if idx.n < mh:
        return False, f"thm34 lower bound requires n >= m*H_m = {float(mh):.6g}, got n={idx.n}"
    return True, f"thm34: m >= 2 and n={idx.n} >= m*H_m = {float(mh):.6g}"


def thm34_exact_endpoints(idx: Index) -> Tuple[Fraction, Fraction]:
    """
    (lower, upper) as exact rationals: upper = m^n/m!, lower = upper * factor
    with factor = 1 - (m^2 H_{m,2} - m H_m) / (n - m H_m + 1)^2 clamped at 0.
    The lower value is only a bound when thm34_precondition holds.
    """
    n, m = idx.n, idx.m
    upper = Fraction(m ** n, math.factorial(m))
    if m < 2:
        return Fraction(0), upper
    sp = moments.scalar_params(m)
    var = m * m * sp.H2 - m * sp.H
    gap = n - m * sp.H + 1
    factor = 1 - var / (gap * gap)
    return upper * max(factor, Fraction(0)), upper


def thm34_bracket(idx: Index, slack: float = DEFAULT_SETTINGS.relative_slack) -> BoundBracket:
    ok, report = thm34_precondition(idx)
    lower, upper = thm34_exact_endpoints(idx)
    upper_log = logspace.log_fraction(upper)
    lower_log = logspace.log_fraction(lower) if ok else logspace.NEG_INF
    if ok and lower == 0:
        report += "; lower bound vacuous (factor <= 0)"
    lower_log, upper_log = logspace.widen(lower_log, upper_log, slack)
    return BoundBracket(idx, Method.THM34, lower_log, upper_log, ok, report,
                        extras={"lower": lower, "upper": upper})


def trivial_upper(idx: Index, slack: float = DEFAULT_SETTINGS.relative_slack) -> BoundBracket:
    """1 <= S(n, m) <= m^n / m!."""
    upper_log = idx.n * logspace.log_int(idx.m) - logspace.log_factorial(idx.m)
    _, upper_log = logspace.widen(logspace.NEG_INF, upper_log, slack)
    return BoundBracket(idx, Method.TRIVIAL_UPPER, ctx.mpf(0), upper_log, True,
                        "S >= 1 and S <= m^n/m! always")
