import math
from fractions import Fraction
from itertools import product

import pytest

from csoutliers.errors import RefusalError
from csoutliers.walks import (
    WalkTable,
    delta2_gap,
    delta_gap,
    e_no1,
    e_no2,
    e_yes,
    expected_abs_offset,
    expected_abs_offset_vector,
    gap_constants,
    heavy_part_patterns,
    monte_carlo_abs_offset,
    walk_count,
)

from conftest import sign_pattern_x


def _vector_by_enumeration(v):
    total = sum(abs(sum(s * a for s, a in zip(signs, v))) for signs in product((1, -1), repeat=len(v)))
    return Fraction(total, 2 ** len(v))


@pytest.mark.parametrize("args,expected", [((0, 0, 0), 1), ((0, 4, 0), 6), ((2, 2, 1), 1)])
def test_walk_count_examples(args, expected):
    assert walk_count(*args) == expected


@pytest.mark.parametrize(
    "args,expected",
    [((5, 0, 0), 5), ((0, 2, 1), 2), ((0, 4, 0), Fraction(3, 2)), ((0, 6, 0), Fraction(15, 8))],
)
def test_expected_abs_offset_examples(args, expected):
    assert expected_abs_offset(*args) == expected


def test_invalid_walk_shapes():
    for bad in ((0, 3, 2), (0, 1, -1)):
        with pytest.raises(ValueError):
            expected_abs_offset(*bad)
        with pytest.raises(ValueError):
            walk_count(*bad)


def test_recurrence_matches_enumeration():
    table = WalkTable()
    for r in range(0, 13):
        for t in range(0, r // 2 + 1):
            for i in range(-(r + 2), r + 3):
                assert table.x(i, r, t) == sign_pattern_x(i, r, t)


def test_walk_counts_match_enumeration():
    for r in range(0, 11):
        for t in range(0, r // 2 + 1):
            steps = [1] * (r - 2 * t) + [2] * t
            ends = [sum(s * a for s, a in zip(signs, steps)) for signs in product((1, -1), repeat=len(steps))]
            for i in range(-r - 1, r + 2):
                assert walk_count(i, r, t) == ends.count(i)


def test_closed_forms():
    for r in range(0, 17, 2):
        for i in range(-(r // 2), r // 2 + 1):
            assert walk_count(2 * i, r, 0) == math.comb(r, r // 2 - i)
    for t in range(0, 9):
        for i in range(-2 * t - 2, 2 * t + 3):
            expected = math.comb(t, (2 * t - i) // 4) if (2 * t - i) % 4 == 0 and abs(i) <= 2 * t else 0
            assert walk_count(i, 2 * t, t) == expected


def test_second_difference_base_values():
    table = WalkTable()
    assert table.d2x(0, 4, 2) == Fraction(-1, 2)
    assert table.d2x(1, 4, 2) == table.d2x(-1, 4, 2) == Fraction(-1, 8)
    with pytest.raises(ValueError):
        table.d2x(0, 4, 1)
    with pytest.raises(ValueError):
        table.dx(0, 4, 0)


def test_single_double_step_raises_expectation():
    for n_star in range(2, 25):
        assert expected_abs_offset(0, n_star, 0) < expected_abs_offset(0, n_star, 1)


def test_offset_monotone_in_start():
    for r in range(0, 13):
        for i in range(0, r + 3):
            for j in range(0, i - 1):
                assert expected_abs_offset(i, r, 0) > expected_abs_offset(j, r, 0)


def test_delta_gap_values():
    assert delta_gap(4) == Fraction(1, 2)
    assert delta_gap(6) == Fraction(-1, 8)
    for n_star in (4, 8, 12, 16, 20):
        assert delta_gap(n_star) > 0
    with pytest.raises(ValueError):
        delta_gap(3)


def test_vector_examples():
    assert expected_abs_offset_vector([2]) == 2
    assert expected_abs_offset_vector([1, 1]) == 1
    assert expected_abs_offset_vector([2, 1, 1, 1, 1]) == Fraction(9, 4) == expected_abs_offset(2, 4, 0)
    for bad in ([], [0, 1]):
        with pytest.raises(ValueError):
            expected_abs_offset_vector(bad)


@pytest.mark.parametrize("v", [[3, 1, 1], [2, 2, 1, 1, 1], [4, 2, 1], [1] * 7, [5, 3, 1, 1, 1, 1]])
def test_vector_matches_enumeration(v):
    assert expected_abs_offset_vector(v) == _vector_by_enumeration(v)


def test_delta2_values():
    assert heavy_part_patterns(3) == [()]
    assert delta2_gap(3) == Fraction(3, 8)
    for k in (3, 4, 5):
        assert delta2_gap(k) > 0
    with pytest.raises(ValueError):
        delta2_gap(2)


def test_delta2_matches_plain_enumeration_k4():
    # n* = 12; brute force over heavy multisets with sum <= 3 except (3,)
    top = _vector_by_enumeration([3] + [1] * 9)
    options = [[], [2]]
    values = [top - _vector_by_enumeration(h + [1] * (12 - sum(h))) for h in options]
    assert delta2_gap(4) == min(values)


@pytest.mark.parametrize(
    "v,exact", [([1, 1], Fraction(1)), ([1] * 4, Fraction(3, 2)), ([2, 1, 1, 1, 1], Fraction(9, 4)), ([3, 2, 1, 1], None)]
)
def test_monte_carlo_brackets_exact(v, exact):
    exact = exact if exact is not None else expected_abs_offset_vector(v)
    mean, se = monte_carlo_abs_offset(v, 10**5, seed=1)
    assert abs(mean - float(exact)) <= 4 * se


def test_monte_carlo_degenerate():
    assert monte_carlo_abs_offset([2], 50, seed=0) == (2.0, 0.0)
    with pytest.raises(ValueError):
        monte_carlo_abs_offset([1], 0)


def test_literal_coefficients_k3():
    for l1, l2 in ((1, 1), (2, 5), (7, 3)):
        assert e_yes(3, l1, l2, literal=True) == Fraction(9, 4) * (l1 + l2)
        # halved walk terms: 3 - 9/8 per column
        assert e_yes(3, l1, l2) == Fraction(45, 8) * (l1 + l2)


def test_gap_constants_k4():
    c = gap_constants(4, 10)
    assert c.n_star == 12 and c.delta == delta_gap(12)
    assert c.ratio == math.ceil(Fraction(4 * 12) / c.delta) == 1756
    assert c.kappa_yes < c.kappa_yes_p < c.kappa_no_p < c.kappa_no
    assert c.kappa_no == min(c.kappa_no1, c.kappa_no2) == c.kappa_no2
    assert c.d_no / c.d_yes > 1
    assert c.l2 == c.l1 * c.ratio and c.length == 4 * c.l1 + 6 * c.l2
    assert c.l1_required == 360279979
    assert gap_constants(4, 10, literal=True).l1_required == 180139990


def test_gap_constants_override_and_report():
    c = gap_constants(4, 6, l1=1)
    assert (c.l1, c.length) == (1, 10540)
    assert c.e_yes == e_yes(4, 1, c.ratio) == c.kappa_yes
    assert c.e_no1 == e_no1(4, 1, c.ratio) and c.e_no2 == e_no2(4, 1, c.ratio)
    lines = c.report().splitlines()
    assert lines[0] == "k = 4" and "l1 = 1" in lines
    assert all(" = " in line for line in lines)


@pytest.mark.parametrize("k,m", [(2, 1), (3, 3), (6, 10), (4, 0)])
def test_gap_constants_refusals(k, m):
    with pytest.raises(RefusalError):
        gap_constants(k, m)


def test_gap_constants_orderings_hold_for_k5():
    c = gap_constants(5, 10, l1=1)
    assert c.kappa_yes < c.kappa_yes_p < c.kappa_no_p < c.kappa_no
