import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import exact_oracles
import moments
from errors import IntegralityError, InvalidIndexError, OrderCapExceededError
from stirling_types import Index


@pytest.mark.parametrize("n m expected".split(), [
    (4, 2, 7),
    (5, 3, 25),
    (6, 3, 90),
    (10, 9, 45),
    (100, 99, 4950),
    (100, 2, 2 ** 99 - 1),
    (7, 7, 1),
    (7, 1, 1),
])
def test_known_values(n, m, expected):
    idx = Index(n, m)
    assert exact_oracles.stirling_exact(idx) == expected
    assert exact_oracles.stirling_via_moments(idx) == expected


def test_row_sums_are_bell_numbers():
    bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]
    for n, b in enumerate(bell):
        assert sum(exact_oracles.stirling_row(n)) == b


def test_triangle_matches_rows():
    rows = exact_oracles.stirling_triangle(30)
    for n in range(31):
        assert rows[n] == exact_oracles.stirling_row(n)


@given(st.integers(min_value=1, max_value=120).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(min_value=1, max_value=n))))
@settings(max_examples=60, deadline=None)
def test_column_recurrence_matches_row(nm):
    n, m = nm
    assert exact_oracles.stirling_exact(Index(n, m)) == exact_oracles.stirling_row(n)[m]


def test_moment_route_on_grid(triangle):
    for n in range(1, 61):
        for m in range(1, n + 1):
            assert exact_oracles.stirling_via_moments(Index(n, m)) == triangle[n][m], (n, m)


def test_probability_route_on_grid(triangle):
    # one CDF table per m covers the whole column
    for m in range(2, 61):
        cdf = exact_oracles.geometric_sum_cdf_exact(m, 60 - m)
        for n in range(m, 61):
            value = Fraction(m ** n, math.factorial(m)) * cdf[n - m]
            assert value == triangle[n][m], (n, m)


@pytest.mark.parametrize("n m".split(), [(4, 2), (10, 4), (25, 7), (40, 39), (60, 30)])
def test_probability_route_direct(n, m, triangle):
    assert exact_oracles.stirling_via_probability(Index(n, m)) == triangle[n][m]


@pytest.mark.slow
def test_probability_route_full_grid(triangle):
    for n in range(2, 61):
        for m in range(2, n + 1):
            assert exact_oracles.stirling_via_probability(Index(n, m)) == triangle[n][m]


def test_probability_route_rejects_m1():
    with pytest.raises(InvalidIndexError):
        exact_oracles.stirling_via_probability(Index(5, 1))
    with pytest.raises(InvalidIndexError):
        exact_oracles.geometric_sum_cdf_exact(1, 3)


def test_cdf_small_cases():
    # V_1 = X(1/2): P(V_1 <= 2) = 1 - (1/2)^3
    assert exact_oracles.geometric_sum_cdf_exact(2, 2)[2] == Fraction(7, 8)
    # P(V_{m-1} = 0) = prod (1 - j/m) = (m-1)!/m^(m-1)
    for m in range(2, 9):
        assert exact_oracles.geometric_sum_cdf_exact(m, 0)[0] == Fraction(math.factorial(m - 1), m ** (m - 1))


def test_single_geometric_pmf():
    pmf = exact_oracles.geometric_sum_pmf_exact([Fraction(1, 2)], 6)
    assert pmf == [Fraction(1, 2 ** (k + 1)) for k in range(7)]


def test_pmf_rejects_bad_parameters():
    with pytest.raises(ValueError):
        exact_oracles.geometric_sum_pmf_exact([Fraction(1)], 3)
    with pytest.raises(ValueError):
        exact_oracles.geometric_sum_pmf_exact([Fraction(1, 2)], -1)


@pytest.mark.parametrize("q", [Fraction(1, 2), Fraction(1, 3), Fraction(7, 10), Fraction(99, 100)])
@pytest.mark.parametrize("n m".split(), [(5, 2), (6, 3), (12, 5), (20, 17)])
def test_tilted_route_is_independent_of_q(n, m, q, triangle):
    assert exact_oracles.stirling_via_tilted_pmf(Index(n, m), q) == triangle[n][m]


def test_tilted_route_detects_wrong_probability(monkeypatch):
    monkeypatch.setattr(exact_oracles, "tilted_point_probability",
                        lambda idx, q: Fraction(1, 3))
    with pytest.raises(IntegralityError):
        exact_oracles.stirling_via_tilted_pmf(Index(6, 3), Fraction(1, 2))


def test_moment_route_order_cap():
    with pytest.raises(OrderCapExceededError):
        exact_oracles.stirling_via_moments(Index(20, 5), order_cap=10)


def test_defining_identity():
    for n in range(1, 41):
        assert exact_oracles.verify_defining_identity(n)


def test_falling_factorial():
    assert exact_oracles.falling_factorial(5, 0) == 1
    assert exact_oracles.falling_factorial(5, 3) == 60
    assert exact_oracles.falling_factorial(2, 3) == 0


@pytest.mark.parametrize("n m".split(), [(5, 7), (0, 0), (3, 0), (-1, 1)])
def test_invalid_index(n, m):
    with pytest.raises(InvalidIndexError):
        Index(n, m)


def test_index_rejects_non_integers():
    with pytest.raises(InvalidIndexError):
        Index(5.0, 2)
    with pytest.raises(InvalidIndexError):
        Index(True, 1)
    # also a ValueError, for callers that only know the builtin
    with pytest.raises(ValueError):
        Index(2, 3)


@pytest.mark.parametrize("m", [2, 3, 5, 10, 25])
def test_cdf_is_monotone_with_chebyshev_tail(m):
    mean, var = moments.geometric_sum_mean_var(m)
    k_max = int(mean + 20 * float(var) ** 0.5) + 5
    cdf = exact_oracles.geometric_sum_cdf_exact(m, k_max)
    assert all(0 < a < b < 1 for a, b in zip(cdf, cdf[1:]))
    for k in range(k_max + 1):
        if k > mean:
            assert 1 - cdf[k] <= var / (k - mean) ** 2, (m, k)
