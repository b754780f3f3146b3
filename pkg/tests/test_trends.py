import math

import trends


def test_case1_relative_radius_shrinks_with_m():
    rows = trends.case1_trend([25, 50, 100, 200], d=3)
    ratios = [r.relative_radius for r in rows]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    by_m = {r.m: r for r in rows}
    assert by_m[100].relative_radius <= 1
    for r in rows:
        assert r.relative_radius <= r.radius * (1 + 1e-6)
        assert math.isclose(r.radius, trends.thm33_relative_radius_bound(r.m, 3), rel_tol=1e-12)


def test_case2_remainder_decays_like_inverse_square():
    rows = trends.case2_trend(5, [50, 100, 200, 400])
    ratios = trends.decay_ratios([r.remainder for r in rows])
    assert all(ratio >= 3.5 for ratio in ratios)


def test_case3_error_decays_like_inverse_m():
    rows = trends.case3_trend([50, 100, 200, 400])
    errors = [r.error for r in rows]
    assert all(ratio >= 1.5 for ratio in trends.decay_ratios(errors))
    scaled = [r.error * r.m for r in rows]
    assert max(scaled) / min(scaled) <= 3
    widths = [r.relative_half_width for r in rows]
    assert all(a > b for a, b in zip(widths, widths[1:]))


def test_central_n():
    assert trends.central_n(100) == math.ceil(100 * (1 + math.log(100) / 2))
    assert trends.case3_trend([50])[0].n == trends.central_n(50)


def test_rows_export_as_dicts():
    row = trends.case2_trend(5, [50])[0]
    assert set(row.as_dict()) == {"m", "n", "remainder"}
