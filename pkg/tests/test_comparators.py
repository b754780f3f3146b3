import math
from fractions import Fraction

import pytest
from scipy.optimize import brentq

import comparators
import logspace
from errors import InvalidIndexError
from stirling_types import Index


def _rel_error(estimate_log, exact):
    return abs(math.expm1(float(estimate_log - logspace.exact_log(exact))))


def test_jordan_small_m_at_100_2():
    small, _ = comparators.jordan_estimates(Index(100, 2))
    assert _rel_error(small.value_log, 2 ** 99 - 1) < 0.01
    assert not small.certified


def test_jordan_large_m_at_100_99():
    _, large = comparators.jordan_estimates(Index(100, 99))
    assert float(large.value_log) == pytest.approx(math.log(5000), rel=1e-12)


def test_jordan_on_diagonal():
    small, large = comparators.jordan_estimates(Index(9, 9))
    assert logspace.is_finite(small.value_log)
    assert large.value_log == 0


def test_jordan_small_m_error_decreases(triangle):
    errors = [_rel_error(comparators.jordan_estimates(Index(n, 3))[0].value_log, triangle[n][3])
              for n in (20, 40, 80, 160)]
    assert all(a > b for a, b in zip(errors, errors[1:]))


@pytest.mark.parametrize("n m lower upper".split(), [(4, 2, 7, 12), (5, 4, 10, 10)])
def test_rennie_dobson_examples(n, m, lower, upper):
    rd = comparators.rennie_dobson_bracket(Index(n, m))
    assert rd.certified
    assert (rd.lower_exact, rd.upper_exact) == (Fraction(lower), Fraction(upper))


def test_rennie_dobson_rejects_diagonal():
    with pytest.raises(InvalidIndexError):
        comparators.rennie_dobson_bracket(Index(6, 6))


def test_rennie_dobson_containment_grid(triangle):
    for n in range(2, 151):
        for m in range(1, n):
            rd = comparators.rennie_dobson_bracket(Index(n, m))
            assert rd.lower_exact <= triangle[n][m] <= rd.upper_exact, (n, m)


def test_r_equation_against_brentq():
    r = comparators.solve_r_equation(2.0)
    reference = brentq(lambda x: x / -math.expm1(-x) - 2.0, 1e-6, 10.0, xtol=1e-15)
    assert r == pytest.approx(reference, abs=1e-9)
    assert r == pytest.approx(1.5936, abs=1e-4)


def test_r_equation_near_one_stays_finite():
    r = comparators.solve_r_equation(1 + 1e-9)
    assert 0 < r < 1e-6
    assert comparators.r_equation_lhs(0.0) == 1.0
    with pytest.raises(ValueError):
        comparators.solve_r_equation(1.0)
    mw = comparators.moser_wyman_leading(Index(100001, 100000))
    assert logspace.is_finite(mw.value_log)


def test_moser_wyman_at_60_20(triangle):
    mw = comparators.moser_wyman_leading(Index(60, 20))
    assert not mw.certified
    assert _rel_error(mw.value_log, triangle[60][20]) < 0.05


def test_moser_wyman_error_decreases(triangle):
    errors = [_rel_error(comparators.moser_wyman_leading(Index(3 * m, m)).value_log, triangle[3 * m][m])
              for m in (10, 20, 40)]
    assert errors[0] > errors[1] > errors[2]


def test_moser_wyman_rejects_diagonal():
    with pytest.raises(InvalidIndexError):
        comparators.moser_wyman_leading(Index(7, 7))
