"""
Stochastic and quadrature checks of the three representations of S(n, m):

    S(n, m) = E S_m^{n-m} / (n-m)!
            = m^n q^{m-n} / prod_j (m - qj) * P(W_m(q) = n - m)     (any 0 < q < 1)
            = m^n / m! * P(V_{m-1} <= n - m)

Every sampler takes an explicit RandomStream. Streams are never shared between
concurrent tasks; parallel work derives one child per task with
RandomStream.spawn, which is numpy's SeedSequence.spawn.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Union

import numpy as np
from numpy.random import PCG64, Generator, Philox, SeedSequence
from scipy.integrate import IntegrationWarning, quad

import central
import exact_oracles
import logspace
from config import DEFAULT_SETTINGS
from errors import InvalidIndexError, PowerTooLargeError, QuadratureError
from stirling_types import Index

logger = logging.getLogger(__name__)

ctx = logspace.ctx

BIT_GENERATORS = {
    "philox": Philox,
    "pcg64": PCG64,
}

# draws are generated in fixed-size blocks so memory stays bounded and the
# stream consumption (hence the estimate) depends only on n_samples
CHUNK = 100_000

IMAG_TOLERANCE = 1e-10


class RandomStream:
    """Named, seedable, counter-based random stream."""

    def __init__(self, seed: int = DEFAULT_SETTINGS.default_seed,
                 name: str = DEFAULT_SETTINGS.rng_name,
                 _seed_sequence: Optional[SeedSequence] = None):
        if name not in BIT_GENERATORS:
            raise ValueError(f"Unknown generator {name!r}; choose from {sorted(BIT_GENERATORS)}")
        if _seed_sequence is None:
            if seed < 0:
                raise ValueError(f"seed must be a nonnegative integer, got {seed}")
            _seed_sequence = SeedSequence(seed)
        self.seed = seed
        self.name = name
        self._seed_sequence = _seed_sequence
        self._generator = Generator(BIT_GENERATORS[name](_seed_sequence))

    def spawn(self, count: int) -> List["RandomStream"]:
        """Independent child streams; repeated calls keep producing fresh children."""
        return [RandomStream(self.seed, self.name, _seed_sequence=child)
                for child in self._seed_sequence.spawn(count)]

    def random(self, size=None):
        """Uniform draws in [0, 1)."""
        return self._generator.random(size)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, name={self.name!r})"


def _open_uniform(rng: RandomStream, size):
    # 1 - U with U in [0, 1) lies in (0, 1], so its log is finite
    return 1.0 - rng.random(size)


def sample_geometric(q, rng: RandomStream, size=None) -> Union[int, np.ndarray]:
    """
    P(k) = (1 - q) q^k by inversion, k = floor(log U / log q).

    ``q`` may be an array broadcast against ``size``, e.g. one failure
    probability per column of a (draws, m) block.
    """
    q = np.asarray(q, dtype=float)
    if not np.all((q > 0) & (q < 1)):
        raise ValueError(f"sample_geometric needs 0 < q < 1, got {q}")
    k = np.floor(np.log(_open_uniform(rng, size)) / np.log(q))
    if size is None and q.ndim == 0:
        return int(k)
    return k.astype(np.int64)


def sample_exponential(rng: RandomStream, size=None) -> Union[float, np.ndarray]:
    """Unit-rate exponential, -log U."""
    t = -np.log(_open_uniform(rng, size))
    return float(t) if size is None else t


class MCTarget(Enum):
    PROB_REPRESENTATION = "prob"
    MOMENT_REPRESENTATION = "moment"


@dataclass(frozen=True)
class MCReport:
    target: MCTarget
    index: Index
    estimate: float
    std_error: float
    n_samples: int
    seed: int
    reference: object  # working-precision value of the exact target quantity


def z_score(report: MCReport) -> float:
    """(estimate - reference) / std_error; 0 for an exact hit with zero spread."""
    diff = float(report.estimate - report.reference)
    if report.std_error == 0:
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return diff / report.std_error


def _check_run(n_samples: int, seed: int):
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")


def _chunks(n_samples: int):
    done = 0
    while done < n_samples:
        size = min(CHUNK, n_samples - done)
        yield size
        done += size


def mc_probability_representation(idx: Index, n_samples: int,
                                  seed: int = DEFAULT_SETTINGS.default_seed,
                                  rng_name: str = DEFAULT_SETTINGS.rng_name) -> MCReport:
    """Estimate P(V_{m-1} <= n - m), V_{m-1} = X(1/m) + ... + X((m-1)/m)."""
    m, d = idx.m, idx.d
    if m < 2:
        raise InvalidIndexError(f"probability representation needs m >= 2, got m={m}")
    _check_run(n_samples, seed)

    rng = RandomStream(seed, rng_name)
    qs = np.arange(1, m) / m
    hits = 0
    for size in _chunks(n_samples):
        v = sample_geometric(qs, rng, size=(size, m - 1)).sum(axis=1)
        hits += int(np.count_nonzero(v <= d))

    estimate = hits / n_samples
    std_error = math.sqrt(estimate * (1 - estimate) / n_samples)
    reference = logspace.from_rational(exact_oracles.geometric_sum_cdf_exact(m, d)[d])
    logger.debug("MC probability S%s: %d/%d hits (seed %d)", idx, hits, n_samples, seed)
    return MCReport(MCTarget.PROB_REPRESENTATION, idx, estimate, std_error,
                    n_samples, seed, reference)


def mc_moment_representation(idx: Index, n_samples: int,
                             seed: int = DEFAULT_SETTINGS.default_seed,
                             rng_name: str = DEFAULT_SETTINGS.rng_name,
                             power_cap: int = DEFAULT_SETTINGS.mc_power_cap) -> MCReport:
    """Estimate E S_m^{n-m} / (n-m)!, S_m = T_1 + 2 T_2 + ... + m T_m."""
    m, d = idx.m, idx.d
    if d > power_cap:
        raise PowerTooLargeError(
            f"moment representation needs n-m <= {power_cap}, got n-m={d}")
    _check_run(n_samples, seed)

    rng = RandomStream(seed, rng_name)
    weights = np.arange(1, m + 1, dtype=float)
    total = 0.0
    total_sq = 0.0
    for size in _chunks(n_samples):
        s = sample_exponential(rng, size=(size, m)) @ weights
        values = s ** d / math.factorial(d)
        total += math.fsum(values)
        total_sq += math.fsum(values * values)

    estimate = total / n_samples
    if n_samples > 1:
        var = max(total_sq - n_samples * estimate * estimate, 0.0) / (n_samples - 1)
        std_error = math.sqrt(var / n_samples)
    else:
        std_error = 0.0
    reference = ctx.mpf(exact_oracles.stirling_exact(idx))
    return MCReport(MCTarget.MOMENT_REPRESENTATION, idx, estimate, std_error,
                    n_samples, seed, reference)


@dataclass(frozen=True)
class FourierInversion:
    index: Index
    q: float
    integral: float
    imag_part: float
    abs_error: float
    log_prefactor: object
    value_log: object

    @property
    def value(self):
        """Reconstructed S(n, m) at working precision."""
        return ctx.exp(self.value_log)


def _quad(func, settings):
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            return quad(func, -math.pi, math.pi,
                        limit=settings.quadrature_limit,
                        epsabs=settings.quadrature_epsabs)
        except IntegrationWarning as e:
            raise QuadratureError(str(e)) from e


def quadrature_fourier(idx: Index, settings=DEFAULT_SETTINGS) -> FourierInversion:
    """
    P(W_m(q) = n - m) as (1/2pi) * integral over [-pi, pi] of
    prod_j p_j / (1 - q_j e^{i theta}) * e^{-i theta (n - m)}, at the solved tilt q.
    """
    n, m, d = idx.n, idx.m, idx.d
    if m < 2 or n <= m:
        raise InvalidIndexError(f"quadrature_fourier needs m >= 2 and n > m, got S{idx}")

    params = central.solve_tilt(idx, settings.tilt_tolerance, settings.tilt_max_steps)
    qj = params.q * np.arange(1, m + 1) / m
    pj = 1.0 - qj

    def integrand(theta: float) -> complex:
        return complex(np.prod(pj / (1.0 - qj * np.exp(1j * theta)))
                       * np.exp(-1j * theta * d)) / (2 * math.pi)

    real, real_err = _quad(lambda t: integrand(t).real, settings)
    imag, _ = _quad(lambda t: integrand(t).imag, settings)
    if abs(imag) > IMAG_TOLERANCE:
        raise QuadratureError(f"imaginary part {imag:.3g} of the inversion integral for S{idx} is not negligible")
    if real <= 0:
        raise QuadratureError(f"inversion integral for S{idx} is not positive: {real!r}")

    logger.debug("Fourier inversion S%s: integral=%.15g (+-%.2g), q=%r", idx, real, real_err, params.q)
    return FourierInversion(index=idx, q=params.q, integral=real, imag_part=imag,
                            abs_error=real_err, log_prefactor=params.log_prefactor,
                            value_log=params.log_prefactor + ctx.log(ctx.mpf(real)))


def exact_tilted_probability(inversion: FourierInversion) -> Fraction:
    """Exact P(W_m(q) = n - m) at the (binary-exact) tilt the inversion used."""
    return exact_oracles.tilted_point_probability(inversion.index, Fraction(inversion.q))
