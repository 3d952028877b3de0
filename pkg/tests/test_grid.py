from __future__ import annotations

from fractions import Fraction

import pytest

from calibration.errors import ConfigurationError, OffGridError
from calibration.grid import OpenInterval, PredictionGrid, resolve_size, round_half_down


def test_grid_values_are_exact_multiples(grid10):
    assert grid10.size == 11
    assert grid10.value(3) == Fraction(3, 10)
    assert grid10.index_of(Fraction(3, 10)) == 3
    assert grid10.index_of(0.3) == 3
    assert grid10.index_of(1) == 10
    assert grid10.index_of(0) == 0


@pytest.mark.parametrize("p", [Fraction(1, 3), 0.35, 1.1, -0.1])
def test_off_grid_values_are_rejected(grid10, p):
    with pytest.raises(OffGridError):
        grid10.index_of(p)


def test_resolution_must_be_positive():
    with pytest.raises(ConfigurationError):
        PredictionGrid(0)


@pytest.mark.parametrize(
    "x, expected",
    [
        (Fraction(5, 2), 2),
        (Fraction(7, 2), 3),
        (Fraction(11, 4), 3),
        (Fraction(9, 4), 2),
        (Fraction(-1, 2), -1),
        (Fraction(4), 4),
    ],
)
def test_round_half_down(x, expected):
    assert round_half_down(x) == expected


def test_nearest_index_breaks_ties_downward_and_clamps():
    grid = PredictionGrid(4)
    assert grid.nearest_index(Fraction(1, 8)) == 0
    assert grid.nearest_index(Fraction(3, 8)) == 1
    assert grid.nearest_index(Fraction(2, 5)) == 2
    assert grid.nearest_index(2) == 4
    assert grid.nearest_index(-1) == 0


def test_open_interval_excludes_endpoints():
    interval = OpenInterval.of(Fraction(1, 3), Fraction(2, 3))
    assert not interval.contains(Fraction(1, 3))
    assert interval.contains(Fraction(1, 2))
    assert not interval.contains(Fraction(2, 3))
    assert interval.midpoint == Fraction(1, 2)


def test_indices_inside_open_interval():
    grid = PredictionGrid(12)
    assert list(grid.indices_inside(OpenInterval.of(Fraction(1, 3), Fraction(1, 2)))) == [5]
    assert list(grid.indices_inside(OpenInterval.of(Fraction(1, 3), Fraction(4, 9)))) == [5]
    assert list(grid.indices_inside(OpenInterval.of(Fraction(2, 5), Fraction(2, 5)))) == []
    assert list(grid.indices_inside(OpenInterval.of(0, 1))) == list(range(1, 12))


@pytest.mark.parametrize(
    "token, horizon, expected",
    [("cbrt", 4096, 16), ("cbrt", 2**18, 64), ("cbrt", 27, 3), ("cbrt", 1, 1), ("5", 100, 5), (7, 100, 7)],
)
def test_resolve_size(token, horizon, expected):
    assert resolve_size(token, horizon) == expected


@pytest.mark.parametrize("token", ["abc", "0", 0, "-3"])
def test_resolve_size_rejects_bad_tokens(token):
    with pytest.raises(ConfigurationError):
        resolve_size(token, 100)
