"""
Exact moments of S_m = T_1 + 2 T_2 + ... + m T_m (T_j unit exponentials).

The cumulants of S_m are integers, kappa_r = (r-1)! * sum_j j^r, so raw and
central moments obtained from them are exact integers as well.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from errors import OrderCapExceededError


@dataclass(frozen=True)
class ScalarParams:
    m: int
    nu: Fraction
    tau_sq: Fraction
    H: Fraction
    H2: Fraction


@dataclass(frozen=True)
class CumulantTable:
    m: int
    r_max: int
    kappa: Tuple[int, ...]  # kappa[r - 1] is the r-th cumulant

    def __getitem__(self, r: int) -> int:
        """1-based cumulant access, kappa_r."""
        if not 1 <= r <= self.r_max:
            raise IndexError(f"cumulant order {r} outside 1..{self.r_max}")
        return self.kappa[r - 1]


def harmonic(m: int, r: int = 1) -> Fraction:
    """Generalized harmonic number H_{m,r} = sum_{j<=m} 1/j^r."""
    if m < 1:
        return Fraction(0)
    # every j^r divides lcm(1..m)^r, so the sum is one integer numerator
    denom = math.lcm(*range(1, m + 1)) ** r
    return Fraction(sum(denom // j ** r for j in range(1, m + 1)), denom)


def mean_var(m: int) -> Tuple[Fraction, Fraction]:
    """(nu_m, tau_m^2) = (m(m+1)/2, m(m+1)(2m+1)/6)."""
    if m < 1:
        raise ValueError(f"mean_var needs m >= 1, got {m}")
    return Fraction(m * (m + 1), 2), Fraction(m * (m + 1) * (2 * m + 1), 6)


def scalar_params(m: int) -> ScalarParams:
    """Mean, variance of S_m and the harmonic numbers H_m, H_{m,2}."""
    if m < 1:
        raise ValueError(f"scalar_params needs m >= 1, got {m}")
    nu, tau_sq = mean_var(m)
    return ScalarParams(
        m=m,
        nu=nu,
        tau_sq=tau_sq,
        H=harmonic(m, 1),
        H2=harmonic(m, 2),
    )


def power_sum(m: int, r: int) -> int:
    return sum(j ** r for j in range(1, m + 1))


def cumulants(m: int, r_max: int) -> CumulantTable:
    if m < 1 or r_max < 1:
        raise ValueError(f"cumulants needs m >= 1 and r_max >= 1, got ({m}, {r_max})")
    kappa = tuple(math.factorial(r - 1) * power_sum(m, r) for r in range(1, r_max + 1))
    return CumulantTable(m, r_max, kappa)


def _moments_from_cumulants(kappa: List[int], order: int) -> List[int]:
    # mu'_r = sum_{k=1..r} C(r-1, k-1) kappa_k mu'_{r-k}
    mu = [1]
    for r in range(1, order + 1):
        mu.append(sum(math.comb(r - 1, k - 1) * kappa[k - 1] * mu[r - k]
                      for k in range(1, r + 1)))
    return mu


def _check_order(table: CumulantTable, order: int):
    if order < 0:
        raise ValueError(f"moment order must be >= 0, got {order}")
    if order > table.r_max:
        raise OrderCapExceededError(
            f"order {order} exceeds cumulant table r_max={table.r_max}")


def raw_moments(table: CumulantTable, order: int) -> List[int]:
    """E S_m^r for r = 0..order."""
    _check_order(table, order)
    return _moments_from_cumulants(list(table.kappa), order)


def central_moments(table: CumulantTable, order: int) -> List[int]:
    """E (S_m - nu_m)^r for r = 0..order (same recursion with kappa_1 := 0)."""
    _check_order(table, order)
    kappa = list(table.kappa)
    if kappa:
        kappa[0] = 0
    return _moments_from_cumulants(kappa, order)


def geometric_sum_mean_var(m: int) -> Tuple[Fraction, Fraction]:
    """
    Mean and variance of V_{m-1} = X(1/m) + ... + X((m-1)/m).

    Returns (m H_{m-1} - m + 1, m^2 H_{m,2} - m H_m).
    """
    if m < 2:
        raise ValueError(f"geometric_sum_mean_var needs m >= 2, got {m}")
    mean = m * harmonic(m - 1) - m + 1
    var = m * m * harmonic(m, 2) - m * harmonic(m)
    return mean, var
