import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import central
import exact_oracles
import logspace
from errors import ConvergenceError, InvalidIndexError
from stirling_types import Index, Method


@pytest.mark.parametrize("n m".split(), [(6, 3), (60, 20), (150, 2), (150, 149), (40, 5)])
def test_tilt_residual(n, m):
    params = central.solve_tilt(Index(n, m))
    assert 0 < params.q < 1
    assert params.residual <= 1e-12 * max(1, n - m)
    assert abs(central.expected_w(params.q, m) - (n - m)) <= 1e-12 * max(1, n - m)
    assert params.p == 1.0 - params.q
    assert params.sigma_sq_m > params.sigma_sq_m_minus > 0


def test_solve_tilt_rejects_diagonal():
    with pytest.raises(InvalidIndexError):
        central.solve_tilt(Index(5, 5))


def test_expected_w_is_increasing():
    qs = np.linspace(0.01, 0.99, 50)
    values = [central.expected_w(q, 7) for q in qs]
    assert all(a < b for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        central.expected_w(1.0, 7)


def test_prefactor_reproduces_exact_value(triangle):
    # the tilted point probability times the prefactor is S(n, m) for any q
    for n, m in [(6, 3), (12, 4), (20, 15)]:
        params = central.solve_tilt(Index(n, m))
        prob = exact_oracles.tilted_point_probability(Index(n, m), Fraction(params.q))
        value_log = params.log_prefactor + logspace.log_fraction(prob)
        assert float(value_log) == pytest.approx(float(logspace.exact_log(triangle[n][m])), rel=1e-12)


@pytest.mark.slow
def test_thm45_containment_grid(triangle):
    for n in range(3, 151):
        for m in range(2, n):
            idx = Index(n, m)
            bracket = central.thm45_bracket(idx)
            exact_log = logspace.exact_log(triangle[n][m])
            assert bracket.preconditions_ok
            assert bracket.upper_log >= exact_log, idx
            if not bracket.lower_is_vacuous:
                assert bracket.lower_log <= exact_log, idx
            assert bracket.extras["params"].residual <= 1e-12 * max(1, n - m)


def test_thm45_lower_endpoint_when_error_is_small(monkeypatch):
    idx = Index(60, 20)
    params = central.solve_tilt(idx)
    main = 1 / (logspace.ctx.sqrt(logspace.mpf(params.sigma_sq_m)) * logspace.ctx.sqrt(2 * logspace.ctx.pi))
    first, second = main / 100, main / 50
    monkeypatch.setattr(central, "thm45_error_terms", lambda p: (main, first, second))

    bracket = central.thm45_bracket(idx)
    assert not bracket.lower_is_vacuous
    assert "vacuous" not in bracket.report
    error = first + second
    expected_lower, expected_upper = logspace.widen(params.log_prefactor + logspace.ctx.log(main - error),
                                                    params.log_prefactor + logspace.ctx.log(main + error))
    assert bracket.lower_log == expected_lower
    assert bracket.upper_log == expected_upper
    assert bracket.lower_log < bracket.upper_log


def test_thm45_lower_endpoint_is_vacuous_at_moderate_sizes():
    bracket = central.thm45_bracket(Index(60, 20))
    assert bracket.lower_is_vacuous
    assert "main term <= error" in bracket.report


def test_tilt_increases_with_n():
    for m in (2, 5, 20, 60):
        qs = [central.solve_tilt(Index(n, m)).q for n in range(m + 1, 151)]
        assert all(a < b for a, b in zip(qs, qs[1:])), m


def test_variance_decomposition_on_grid():
    for n in range(3, 151, 7):
        for m in range(2, n):
            params = central.solve_tilt(Index(n, m))
            expected = params.sigma_sq_m_minus + params.q / params.p ** 2
            assert params.sigma_sq_m == pytest.approx(expected, rel=1e-12), (n, m)
            qj = params.q * np.arange(1, m + 1) / m
            assert params.sigma_sq_m == pytest.approx(float(np.sum(qj / (1 - qj) ** 2)), rel=1e-9), (n, m)


@pytest.mark.slow
def test_sandwich_at_solved_tilt():
    tol = 1e-9
    for n in range(3, 151):
        for m in range(2, n):
            params = central.solve_tilt(Index(n, m))
            bounds = central.lemma59_sandwich(params.q, m)
            assert bounds.n_over_m_low <= n / m * (1 + tol), (n, m)
            assert n / m <= bounds.n_over_m_high * (1 + tol), (n, m)
            assert bounds.sigma_minus_low <= params.sigma_sq_m_minus * (1 + tol) + tol, (n, m)
            assert params.sigma_sq_m_minus <= bounds.sigma_minus_high * (1 + tol), (n, m)


def test_thm45_at_60_20(triangle):
    bracket = central.thm45_bracket(Index(60, 20))
    assert bracket.method is Method.THM45
    assert bracket.contains_log(logspace.exact_log(triangle[60][20]))


def test_thm45_failed_outside_domain():
    assert not central.thm45_bracket(Index(9, 1)).preconditions_ok
    assert not central.thm45_bracket(Index(9, 9)).preconditions_ok


def test_error_terms_positive():
    main, first, second = central.thm45_error_terms(central.solve_tilt(Index(100, 30)))
    assert main > 0 and first > 0 and second > 0


@given(st.floats(min_value=1e-3, max_value=0.999), st.integers(min_value=2, max_value=200))
@settings(max_examples=100, deadline=None)
def test_sandwich_brackets_n_over_m_and_sigma(q, m):
    bounds = central.lemma59_sandwich(q, m)
    qj = q * np.arange(1, m + 1) / m
    n_over_m = (m + np.sum(qj / (1 - qj))) / m
    sigma_minus = np.sum(qj[:-1] / (1 - qj[:-1]) ** 2)
    tol = 1e-9
    assert bounds.n_over_m_low <= n_over_m * (1 + tol)
    assert n_over_m <= bounds.n_over_m_high * (1 + tol)
    assert bounds.sigma_minus_low <= sigma_minus * (1 + tol) + tol
    assert sigma_minus <= bounds.sigma_minus_high * (1 + tol)


def test_sandwich_rejects_bad_input():
    with pytest.raises(ValueError):
        central.lemma59_sandwich(0.0, 5)
    with pytest.raises(ValueError):
        central.lemma59_sandwich(0.5, 1)


def test_charfn_modulus_identity():
    rng = np.random.default_rng(20240601)
    thetas = np.linspace(-math.pi, math.pi, 64)
    for _ in range(20):
        q = float(rng.uniform(0.01, 0.99))
        m = int(rng.integers(2, 120))
        for theta in thetas:
            direct = central.charfn_modulus_direct(q, m, theta)
            product = central.charfn_modulus(q, m, theta)
            assert product == pytest.approx(direct, rel=1e-12, abs=1e-300)


def test_charfn_modulus_is_one_at_zero():
    assert central.charfn_modulus(0.4, 10, 0.0) == 1.0
    assert central.charfn_modulus(0.4, 10, math.pi) < 1.0


def test_thm45_containment_small_grid(triangle):
    for n in range(3, 41):
        for m in range(2, n):
            bracket = central.thm45_bracket(Index(n, m))
            assert bracket.contains_log(logspace.exact_log(triangle[n][m])), (n, m)


def test_bracket_fails_softly_when_tilt_cannot_be_solved(monkeypatch):
    def stuck(idx, *args, **kwargs):
        raise ConvergenceError("no progress")

    monkeypatch.setattr(central, "solve_tilt", stuck)
    bracket = central.thm45_bracket(Index(60, 20))
    assert not bracket.preconditions_ok
    assert "tilt solve failed" in bracket.report
