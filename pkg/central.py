"""
Central-region estimate of S(n, m).

The tilt q in (0, 1) centres W_m(q) = X(q/m) + X(2q/m) + ... + X(q) at n - m.
With p = 1 - q and the variances sigma_m^2, sigma_{m-1}^2 of W_m(q) and of
W_m(q) - X(q), the normalised value

    S(n, m) * prod_j (m - qj) / (m^n q^{m-n})  =  P(W_m(q) = n - m)

lies within a two-term error of 1 / (sigma_m sqrt(2 pi)).
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

import logspace
from bisection import bisect_increasing
from config import DEFAULT_SETTINGS
from errors import ConvergenceError, InvalidIndexError
from stirling_types import BoundBracket, Index, Method

logger = logging.getLogger(__name__)

ctx = logspace.ctx

# smallest endpoint offset of the initial tilt bracket; 1 - 2**-53 is the
# largest double below 1
MIN_BRACKET_EPS = 2.0 ** -53


@dataclass(frozen=True)
class TiltedParams:
    n: int
    m: int
    q: float
    p: float
    sigma_sq_m: float
    sigma_sq_m_minus: float
    log_prefactor: object
    residual: float
    steps: int


@dataclass(frozen=True)
class SandwichBounds:
    n_over_m_low: float
    n_over_m_high: float
    sigma_minus_low: float
    sigma_minus_high: float


def _failure_probs(q: float, m: int) -> np.ndarray:
    j = np.arange(1, m + 1, dtype=np.longdouble)
    return np.longdouble(q) * j / np.longdouble(m)


def expected_w(q: float, m: int) -> float:
    """E W_m(q) = sum_j q_j / (1 - q_j), q_j = qj/m, in extended precision."""
    if not 0 < q < 1:
        raise ValueError(f"expected_w needs 0 < q < 1, got {q}")
    qj = _failure_probs(q, m)
    terms = qj[:-1] / (1 - qj[:-1])
    # j = m term uses p = 1 - q directly, exact for q >= 1/2
    last = np.longdouble(q) / np.longdouble(1.0 - q)
    return float(np.sum(terms) + last)


def _sigma_sq_minus(q: float, m: int) -> float:
    qj = _failure_probs(q, m)[:-1]
    return float(np.sum(qj / (1 - qj) ** 2))


def _log_prefactor(n: int, m: int, q: float):
    # log(m^n q^{m-n} / prod_j (m - qj)), compensated sum of the product's logs
    log_prod = math.fsum(math.log(m - q * j) for j in range(1, m + 1))
    return (n * logspace.log_int(m) - (n - m) * ctx.log(ctx.mpf(q))
            - ctx.mpf(log_prod))


def solve_tilt(idx: Index,
               tolerance: float = DEFAULT_SETTINGS.tilt_tolerance,
               max_steps: int = DEFAULT_SETTINGS.tilt_max_steps) -> TiltedParams:
    """
    Solve E W_m(q) = n - m by bisection on the increasing map q -> E W_m(q).

    The bracket [eps, 1 - eps] starts at eps = 1/4 and is halved until it
    straddles n - m.
    """
    n, m = idx.n, idx.m
    if n <= m:
        raise InvalidIndexError(f"solve_tilt needs n > m, got (n={n}, m={m})")
    target = float(n - m)
    tol = tolerance * max(1.0, target)

    eps = 0.25
    while expected_w(eps, m) > target or expected_w(1.0 - eps, m) < target:
        if eps <= MIN_BRACKET_EPS:
            raise ConvergenceError(f"cannot bracket the tilt for S{idx}")
        eps = max(eps / 2, MIN_BRACKET_EPS)

    result = bisect_increasing(lambda q: expected_w(q, m), target, eps, 1.0 - eps,
                               f_tol=tol, max_steps=max_steps)
    q = result.x
    p = 1.0 - q
    sigma_minus = _sigma_sq_minus(q, m)
    sigma_m = sigma_minus + q / p ** 2
    logger.debug("tilt for S%s: q=%r after %d steps, residual %.3g",
                 idx, q, result.steps, abs(result.value - target))
    return TiltedParams(n=n, m=m, q=q, p=p,
                        sigma_sq_m=sigma_m,
                        sigma_sq_m_minus=sigma_minus,
                        log_prefactor=_log_prefactor(n, m, q),
                        residual=abs(result.value - target),
                        steps=result.steps)


def thm45_error_terms(params: TiltedParams) -> Tuple:
    """(main term 1/(sigma_m sqrt(2 pi)), first error term, second error term)."""
    sqrt_2pi = ctx.sqrt(2 * ctx.pi)
    sigma_m = ctx.sqrt(ctx.mpf(params.sigma_sq_m))
    sigma_minus = ctx.sqrt(ctx.mpf(params.sigma_sq_m_minus))
    p = ctx.mpf(params.p)
    main = 1 / (sigma_m * sqrt_2pi)
    first = (2 + 9 * sqrt_2pi) / (2 * ctx.pi * p * sigma_m ** 2)
    second = 6 * ctx.sqrt(2) / (ctx.pi * p * sigma_minus * sigma_m)
    return main, first, second


def thm45_bracket(idx: Index, slack: float = DEFAULT_SETTINGS.relative_slack) -> BoundBracket:
    if idx.m < 2 or idx.n <= idx.m:
        return BoundBracket.failed(idx, Method.THM45,
                                   f"thm45 requires m >= 2 and n > m, got S{idx}")
    try:
        params = solve_tilt(idx)
    except ConvergenceError as e:
        logger.warning("thm45 unavailable for S%s: %s", idx, e)
        return BoundBracket.failed(idx, Method.THM45, f"thm45 tilt solve failed: {e}")
    main, first, second = thm45_error_terms(params)
    error = first + second

    # the slack also absorbs the residual of the tilt equation
    upper_log = params.log_prefactor + ctx.log(main + error)
    report = f"thm45: q={params.q:.12g}, sigma_m^2={params.sigma_sq_m:.6g}"
    if main > error:
        lower_log = params.log_prefactor + ctx.log(main - error)
    else:
        lower_log = logspace.NEG_INF
        report += "; lower bound vacuous (main term <= error)"
    lower_log, upper_log = logspace.widen(lower_log, upper_log, slack)
    return BoundBracket(idx, Method.THM45, lower_log, upper_log, True, report,
                        extras={"params": params, "main": main, "error": error})


def lemma59_sandwich(q: float, m: int) -> SandwichBounds:
    """
    Integral-comparison sandwiches for n/m and sigma_{m-1}^2 at tilt q:

        1/(mp) - log(1 - q(m-1)/m)/q  <=  n/m  <=  1/(mp) - log(1 - q)/q
        m(m-1)/(mp+q) + (m/q) log(((m-1)p + 1)/m)  <=  sigma_{m-1}^2
                                                   <=  m/p + (m/q) log(mp/(m-q))
    """
    if not 0 < q < 1:
        raise ValueError(f"lemma59_sandwich needs 0 < q < 1, got {q}")
    if m < 2:
        raise ValueError(f"lemma59_sandwich needs m >= 2, got {m}")
    p = 1.0 - q
    return SandwichBounds(
        n_over_m_low=1 / (m * p) - math.log1p(-q * (m - 1) / m) / q,
        n_over_m_high=1 / (m * p) - math.log1p(-q) / q,
        # ((m-1)p + 1)/m = 1 - q(m-1)/m and mp/(m-q) = 1 - q(m-1)/(m-q)
        sigma_minus_low=m * (m - 1) / (m * p + q) + (m / q) * math.log1p(-q * (m - 1) / m),
        sigma_minus_high=m / p + (m / q) * math.log1p(-q * (m - 1) / (m - q)),
    )


def charfn_modulus(q: float, m: int, theta: float) -> float:
    """|E exp(i theta (W_m(q) - E W_m(q)))| as prod_j (1 + 2(1 - cos theta) q_j/p_j^2)^(-1/2)."""
    if not 0 < q < 1:
        raise ValueError(f"charfn_modulus needs 0 < q < 1, got {q}")
    qj = q * np.arange(1, m + 1) / m
    pj = 1.0 - qj
    # 1 - cos(theta) = 2 sin^2(theta/2) keeps small theta accurate
    one_minus_cos = 2.0 * math.sin(theta / 2) ** 2
    return float(np.prod((1.0 + 2.0 * one_minus_cos * qj / pj ** 2) ** -0.5))


def charfn_modulus_direct(q: float, m: int, theta: float) -> float:
    """|prod_j p_j / (1 - q_j e^{i theta})| evaluated in complex arithmetic."""
    qj = q * np.arange(1, m + 1) / m
    pj = 1.0 - qj
    return float(abs(np.prod(pj / (1.0 - qj * np.exp(1j * theta)))))
