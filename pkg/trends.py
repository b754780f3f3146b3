"""
Finite-scale sharpness trends of the three certified brackets.

Each function returns one row per grid point; script_csv.py writes them out
and the tests check the decay rates.
"""

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence

import logspace
import moments
import noncentral
from central import solve_tilt, thm45_error_terms
from stirling_types import Index

ctx = logspace.ctx


@dataclass(frozen=True)
class Case1Row:
    m: int
    n: int
    center: float
    radius: float
    relative_radius: float  # R / C

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Case2Row:
    m: int
    n: int
    remainder: float  # 1 - lower/upper

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Case3Row:
    m: int
    n: int
    q: float
    p: float
    sigma_m: float
    main: float
    error: float
    relative_half_width: float  # error / main

    def as_dict(self):
        return asdict(self)


def case1_trend(ms: Iterable[int], d: int = 3) -> List[Case1Row]:
    rows = []
    for m in ms:
        center, radius = noncentral.thm33_terms(Index(m + d, m))
        c = float(center)
        r = float(radius)
        rows.append(Case1Row(m=m, n=m + d, center=c, radius=r, relative_radius=r / c))
    return rows


def case2_remainder(idx: Index) -> Fraction:
    lower, upper = noncentral.thm34_exact_endpoints(idx)
    return 1 - lower / upper


def case2_trend(m: int, ns: Iterable[int]) -> List[Case2Row]:
    return [Case2Row(m=m, n=n, remainder=float(case2_remainder(Index(n, m)))) for n in ns]


def central_n(m: int) -> int:
    """n = ceil(m (1 + log(m)/2)), a point well inside the central region."""
    return math.ceil(m * (1 + math.log(m) / 2))


def case3_trend(ms: Iterable[int]) -> List[Case3Row]:
    rows = []
    for m in ms:
        params = solve_tilt(Index(central_n(m), m))
        main, first, second = thm45_error_terms(params)
        error = first + second
        rows.append(Case3Row(m=m, n=params.n, q=params.q, p=params.p,
                             sigma_m=math.sqrt(params.sigma_sq_m),
                             main=float(main), error=float(error),
                             relative_half_width=float(error / main)))
    return rows


def decay_ratios(values: Sequence[float]) -> List[float]:
    """values[i] / values[i+1] for consecutive grid points."""
    return [a / b for a, b in zip(values, values[1:])]


def thm33_relative_radius_bound(m: int, d: int) -> float:
    """2 e^{1/4} (2 d tau_m / nu_m)^3, the radius R in closed form."""
    nu, tau_sq = moments.mean_var(m)
    ratio = 2 * d * math.sqrt(tau_sq) / float(nu)
    return 2 * math.exp(0.25) * ratio ** 3
