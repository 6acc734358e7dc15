import pytest
from hypothesis import given
import hypothesis.strategies as st

from sat2tri import farey as fy
from sat2tri.farey import Slope


def test_slope_canonical():
    assert fy.reduce(4, -6) == Slope(-2, 3)
    assert fy.reduce(-3, 0) == Slope(1, 0)
    assert fy.parse_slope("inf") == fy.parse_slope("1/0") == fy.INF
    assert fy.parse_slope("-4/2") == Slope(-2, 1)
    with pytest.raises(ValueError):
        Slope(2, 4)
    with pytest.raises(ValueError):
        fy.parse_slope("0/0")


def test_mediants():
    assert fy.mediant(Slope(0, 1), Slope(1, 1)) == Slope(1, 2)
    assert fy.anti_mediant(Slope(1, 1), Slope(0, 1)) == Slope(1, 0)
    with pytest.raises(ValueError):
        fy.mediant(Slope(0, 1), Slope(2, 1))
    assert fy.is_farey_triple(fy.ZERO, fy.INF, fy.ONE)


def test_continued_fraction():
    assert fy.continued_fraction(13, 8) == [1, 1, 1, 1, 2]
    assert fy.continued_fraction(-7, 3) == [-3, 1, 2]


def test_known_distances():
    assert [fy.farey_distance(fy.parse_slope(s), fy.INF) for s in ("1/1", "2/1", "3/2")] == [1, 1, 2]
    assert fy.farey_distance(Slope(0, 1), Slope(2, 5)) == 2
    assert fy.farey_distance(Slope(-2, 1), Slope(-2, 1)) == 0


def test_fibonacci_values():
    assert [fy.fibonacci(k) for k in range(-2, 8)] == [1, 0, 1, 1, 2, 3, 5, 8, 13, 21]
    assert fy.fibonacci_slope(5) == Slope(13, 8)


@pytest.mark.parametrize("k", range(31))
def test_fibonacci_distance(k):
    d = fy.farey_distance(fy.fibonacci_slope(k), fy.INF)
    assert d == fy.fibonacci_distance_closed_form(k) == k // 2 + 1




def _slope(a, b):
    if a == b == 0:
        return fy.INF
    return fy.reduce(a, b)


small = st.builds(_slope, st.integers(-12, 12), st.integers(-12, 12))


@given(small, small)
def test_distance_matches_bfs(s, t):
    assert fy.farey_distance(s, t) == fy.farey_distance_bfs(s, t)


@given(small, small, small)
def test_distance_is_a_metric(s, t, u):
    d = fy.farey_distance
    assert d(s, t) == d(t, s)
    assert (d(s, t) == 0) == (s == t)
    assert d(s, u) <= d(s, t) + d(t, u)
    assert (d(s, t) == 1) == (fy.intersection_number(s, t) == 1)


@given(small, small, st.sampled_from([((1, 1), (0, 1)), ((0, -1), (1, 0)), ((2, 1), (1, 1)), ((1, 0), (-3, 1))]))
def test_distance_invariant_under_sl2z(s, t, m):
    assert fy.farey_distance(fy.apply_matrix(m, s), fy.apply_matrix(m, t)) == fy.farey_distance(s, t)


@given(small)
def test_matrix_to_infinity(s):
    m = fy.matrix_to_infinity(s)
    (a, b), (c, d) = m
    assert a * d - b * c == 1
    assert fy.apply_matrix(m, s) == fy.INF
