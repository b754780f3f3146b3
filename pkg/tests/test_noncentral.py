import math
from fractions import Fraction

import pytest

import logspace
import moments
import noncentral
from errors import IntegralityError, InvalidIndexError, OrderCapExceededError
from stirling_types import Index, Method


def test_thm33_precondition_boundaries():
    ok, _ = noncentral.thm33_precondition(Index(103, 100))
    assert ok
    ok, report = noncentral.thm33_precondition(Index(102, 100))
    assert not ok and "n-m >= 3" in report
    ok, report = noncentral.thm33_precondition(Index(30, 20))
    assert not ok and "nu_m/(2*tau_m)" in report


def test_thm33_relative_radius_at_m100():
    center, radius = noncentral.thm33_terms(Index(103, 100))
    sp = moments.scalar_params(100)
    expected = 2 * math.exp(0.25) * (6 * math.sqrt(sp.tau_sq) / float(sp.nu)) ** 3
    assert float(radius) == pytest.approx(expected, rel=1e-12)
    assert float(radius) / float(center) <= 1


def test_thm33_containment_grid(triangle):
    applicable = 0
    for n in range(4, 201):
        for m in range(1, n - 2):
            idx = Index(n, m)
            bracket = noncentral.thm33_bracket(idx)
            if not bracket.preconditions_ok:
                assert not noncentral.thm33_precondition(idx)[0]
                continue
            applicable += 1
            assert bracket.contains_log(logspace.exact_log(triangle[n][m])), idx
    assert applicable > 0


def test_thm33_failed_bracket_is_unbounded():
    bracket = noncentral.thm33_bracket(Index(30, 10))
    assert not bracket.preconditions_ok
    assert bracket.lower_is_vacuous
    assert not logspace.is_finite(bracket.upper_log)


def test_exact_near_diagonal_to_500():
    # S(n, n-1) = C(n, 2); S(n, n-2) = C(n, 3) + 3 C(n, 4)
    for n in range(2, 501):
        assert noncentral.exact_near_diagonal(Index(n, n - 1)) == math.comb(n, 2)
    for n in range(3, 501):
        assert noncentral.exact_near_diagonal(Index(n, n - 2)) == math.comb(n, 3) + 3 * math.comb(n, 4)


def test_exact_near_diagonal_matches_recurrence(triangle):
    for n in range(3, 201):
        assert noncentral.exact_near_diagonal(Index(n, n - 1)) == triangle[n][n - 1]
        assert noncentral.exact_near_diagonal(Index(n, n - 2)) == triangle[n][n - 2]
    with pytest.raises(InvalidIndexError):
        noncentral.exact_near_diagonal(Index(10, 5))


def test_expansion_exact_grid(triangle):
    for n in range(1, 51):
        for m in range(1, n + 1):
            assert noncentral.expansion_exact(Index(n, m)) == triangle[n][m], (n, m)


def test_expansion_order_cap():
    with pytest.raises(OrderCapExceededError):
        noncentral.expansion_exact(Index(30, 5), order_cap=10)


def test_expansion_flags_non_integer(monkeypatch):
    monkeypatch.setattr(moments, "central_moments", lambda table, order: [1, 0, 1, 1, 1])
    with pytest.raises(IntegralityError):
        noncentral.expansion_exact(Index(7, 3))


def test_thm34_containment_grid(triangle):
    applicable = 0
    for n in range(2, 201):
        for m in range(2, n + 1):
            idx = Index(n, m)
            ok, _ = noncentral.thm34_precondition(idx)
            if not ok:
                continue
            applicable += 1
            lower, upper = noncentral.thm34_exact_endpoints(idx)
            assert lower <= triangle[n][m] <= upper, idx
    assert applicable > 0


def test_thm34_precondition_is_exact():
    # m H_m = 11/2 at m = 3
    assert not noncentral.thm34_precondition(Index(5, 3))[0]
    assert noncentral.thm34_precondition(Index(6, 3))[0]
    assert not noncentral.thm34_precondition(Index(6, 1))[0]


def test_thm34_bracket_at_100_3(triangle):
    bracket = noncentral.thm34_bracket(Index(100, 3))
    assert bracket.preconditions_ok
    assert bracket.method is Method.THM34
    assert bracket.contains_log(logspace.exact_log(triangle[100][3]))
    lower, upper = bracket.extras["lower"], bracket.extras["upper"]
    assert upper == Fraction(3 ** 100, 6)
    assert 0 < lower < upper


def test_thm34_lower_vacuous_without_precondition():
    bracket = noncentral.thm34_bracket(Index(8, 5))
    assert not bracket.preconditions_ok
    assert bracket.lower_is_vacuous
    assert logspace.is_finite(bracket.upper_log)


def test_trivial_upper_always_contains(triangle):
    for n in range(1, 81):
        for m in range(1, n + 1):
            bracket = noncentral.trivial_upper(Index(n, m))
            assert bracket.preconditions_ok
            assert bracket.contains_log(logspace.exact_log(triangle[n][m]))
