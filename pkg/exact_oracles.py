"""
Exact S(n, m) by independent routes.

- stirling_exact: triangular recurrence in nonnegative integers.
- stirling_via_moments: E S_m^{n-m} / (n-m)! from the cumulant machinery.
- stirling_via_probability: m^n/m! * P(V_{m-1} <= n-m), exact rational CDF.
- stirling_via_tilted_pmf: m^n q^{m-n} / prod(m - qj) * P(W_m(q) = n-m) for any
  rational q in (0, 1).

Every function is pure; nothing is memoised across calls.
"""

import logging
import math
from fractions import Fraction
from typing import List, Sequence

import moments
from config import DEFAULT_SETTINGS
from errors import IntegralityError, InvalidIndexError, OrderCapExceededError
from stirling_types import ExactValue, Index

logger = logging.getLogger(__name__)

RationalCDFTable = List[Fraction]


def _as_integer(value: Fraction, route: str, idx: Index) -> int:
    if value.denominator != 1:
        raise IntegralityError(f"{route} gave non-integer {value} for S{idx}")
    return value.numerator


def stirling_row(n: int) -> List[int]:
    """[S(n, 0), ..., S(n, n)] from S(k, j) = j S(k-1, j) + S(k-1, j-1)."""
    if n < 0:
        raise InvalidIndexError(f"row index must be >= 0, got {n}")
    row = [1]
    for k in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, k + 1):
            new[j] = (j * row[j] if j < k else 0) + row[j - 1]
        row = new
    return row


def stirling_triangle(n_max: int) -> List[List[int]]:
    """Rows 0..n_max of the triangle, each built from the previous one."""
    rows = [[1]]
    for k in range(1, n_max + 1):
        prev = rows[-1]
        rows.append([0] + [(j * prev[j] if j < k else 0) + prev[j - 1]
                           for j in range(1, k + 1)])
    return rows


def stirling_exact(idx: Index) -> ExactValue:
    """S(n, m) by the recurrence, keeping only columns 0..m (O(m) memory)."""
    n, m = idx.n, idx.m
    col = [1] + [0] * m
    for k in range(1, n + 1):
        # walk right-to-left so col[j-1] is still the previous row's value
        for j in range(min(k, m), 0, -1):
            col[j] = j * col[j] + col[j - 1]
        col[0] = 0
    return col[m]


def stirling_via_moments(idx: Index, order_cap: int = DEFAULT_SETTINGS.moment_order_cap) -> ExactValue:
    d = idx.d
    if d > order_cap:
        raise OrderCapExceededError(f"n-m={d} exceeds the moment-route cap {order_cap}")
    if d == 0:
        return 1
    table = moments.cumulants(idx.m, d)
    mu = moments.raw_moments(table, d)[d]
    return _as_integer(Fraction(mu, math.factorial(d)), "moment route", idx)


def geometric_sum_pmf_exact(q_list: Sequence[Fraction], k_max: int) -> List[Fraction]:
    """
    Exact PMF on 0..k_max of a sum of independent geometrics X(q_i),
    P(X(q) = k) = (1 - q) q^k.

    Convolving with one geometric obeys new[k] = p*old[k] + q*new[k-1], so the
    table costs O(len(q_list) * k_max) rational operations.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    pmf = [Fraction(1)] + [Fraction(0)] * k_max
    for q in q_list:
        q = Fraction(q)
        if not 0 < q < 1:
            raise ValueError(f"geometric failure probability must lie in (0,1), got {q}")
        p = 1 - q
        new = [Fraction(0)] * (k_max + 1)
        new[0] = p * pmf[0]
        for k in range(1, k_max + 1):
            new[k] = p * pmf[k] + q * new[k - 1]
        pmf = new
    return pmf


def geometric_sum_cdf_exact(m: int, k_max: int) -> RationalCDFTable:
    """P(V_{m-1} <= k) for k = 0..k_max, V_{m-1} = X(1/m) + ... + X((m-1)/m)."""
    if m < 2:
        raise InvalidIndexError(f"geometric_sum_cdf_exact needs m >= 2, got {m}")
    pmf = geometric_sum_pmf_exact([Fraction(j, m) for j in range(1, m)], k_max)
    cdf, acc = [], Fraction(0)
    for mass in pmf:
        acc += mass
        cdf.append(acc)
    return cdf


def stirling_via_probability(idx: Index) -> ExactValue:
    n, m = idx.n, idx.m
    if m < 2:
        raise InvalidIndexError(f"probability route needs m >= 2, got m={m}")
    prob = geometric_sum_cdf_exact(m, idx.d)[idx.d]
    return _as_integer(Fraction(m ** n, math.factorial(m)) * prob, "probability route", idx)


def tilted_point_probability(idx: Index, q: Fraction) -> Fraction:
    """Exact P(W_m(q) = n - m), W_m(q) = sum_j X(qj/m)."""
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError(f"tilt q must lie in (0,1), got {q}")
    m = idx.m
    return geometric_sum_pmf_exact([q * j / m for j in range(1, m + 1)], idx.d)[idx.d]


def stirling_via_tilted_pmf(idx: Index, q: Fraction) -> ExactValue:
    q = Fraction(q)
    n, m = idx.n, idx.m
    prefactor = Fraction(m ** n) * q ** (m - n)
    for j in range(1, m + 1):
        prefactor /= (m - q * j)
    return _as_integer(prefactor * tilted_point_probability(idx, q), "tilted route", idx)


def falling_factorial(k: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= k - i
    return out


def verify_defining_identity(n: int) -> bool:
    """Check sum_m S(n, m) (k)_m == k^n for k = 0..n."""
    if n < 1:
        raise InvalidIndexError(f"verify_defining_identity needs n >= 1, got {n}")
    row = stirling_row(n)
    for k in range(n + 1):
        lhs = sum(row[m] * falling_factorial(k, m) for m in range(n + 1))
        if lhs != k ** n:
            logger.debug("defining identity fails at n=%d, k=%d", n, k)
            return False
    return True
