from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from adversaries import (
    EarlyStoppingWrapper,
    EpochClass,
    SchemeParams,
    SidesteppingScheme,
    epoch_interval,
)
from adversaries.sidestep import run_epoch
from calibration.errors import ConfigurationError
from calibration.grid import OpenInterval, PredictionGrid
from calibration.ledger import CalibrationLedger
from engine.context import new_context
from engine.runner import play_game
from forecasters import build_forecaster
from signgame.state import rescan_preserved
from signgame.strategies import BinarySearchStrategy


def _scheme(params: SchemeParams) -> SidesteppingScheme:
    return SidesteppingScheme(params, BinarySearchStrategy.for_cells(params.k, params.num_epochs))


def test_scheme_parameters_at_4096():
    params = SchemeParams(horizon=4096)
    assert params.k == 17
    assert params.num_epochs == 3
    assert params.epoch_len == 1414
    assert params.untruthful_threshold == pytest.approx(707.3, abs=0.1)
    assert params.theta == pytest.approx(0.00906, abs=1e-4)
    assert 0 < params.B < params.horizon / (48 * params.k ** (params.alpha + 1))
    assert params.grid == PredictionGrid(4096)


def test_scheme_parameters_reject_tiny_horizons():
    with pytest.raises(ValueError):
        SchemeParams(horizon=2)


def test_epoch_intervals_tile_the_middle_third():
    interval, bias = epoch_interval(3, 2)
    assert (interval.lo, interval.hi) == (Fraction(4, 9), Fraction(5, 9))
    assert bias == Fraction(1, 2)
    first, _ = epoch_interval(17, 1)
    last, _ = epoch_interval(17, 17)
    assert first.lo == Fraction(1, 3)
    assert last.hi == Fraction(2, 3)


def test_coarse_grid_is_refused_before_play():
    params = SchemeParams(horizon=4096, grid_resolution=102)
    with pytest.raises(ConfigurationError):
        params.check_grid(params.grid)
    with pytest.raises(ConfigurationError):
        play_game(_scheme(params), build_forecaster("hedging"), horizon=4096, grid=PredictionGrid(102))


def test_player_a_must_fit_the_scheme():
    params = SchemeParams(horizon=4096)
    with pytest.raises(ConfigurationError):
        SidesteppingScheme(params, BinarySearchStrategy.for_cells(params.k + 1, 3))


def test_constant_half_against_the_scheme():
    params = SchemeParams(horizon=4096)
    result = play_game(_scheme(params), build_forecaster("const:1/2"), horizon=4096, grid=params.grid, seed=7)
    epochs = result.transcript.epochs
    assert [e.cell for e in epochs][0] == 9
    # 1/2 lies inside the first interval, so one bit already pushes its error past theta
    assert (epochs[0].length, epochs[0].stopped_by_threshold) == (1, True)
    assert [e.length for e in epochs[1:]] == [1414, 1414]
    assert not any(e.stopped_by_threshold for e in epochs[1:])
    assert result.steps == result.t_act == 2829
    assert result.preserved_signs == 3
    assert rescan_preserved([(e.cell, e.sign) for e in epochs]) == 3

    labels = result.epoch_labels
    assert [label.label for label in labels[1:]] == [EpochClass.UNTRUTHFUL, EpochClass.UNTRUTHFUL]
    assert labels[0].label is EpochClass.UNCOVERED
    assert labels[0].outside_predictions == 0
    assert not any(label.threshold_divergence for label in labels)


def test_epoch_bits_follow_the_interval_midpoint():
    params = SchemeParams(horizon=4096)
    result = play_game(_scheme(params), build_forecaster("const:1/2"), horizon=4096, grid=params.grid, seed=3)
    transcript = result.transcript
    for epoch in transcript.epochs:
        announced = set(transcript.announced[epoch.start_step : epoch.end_step])
        assert announced == {float(epoch.bias)}
        assert Fraction(1, 3) < epoch.bias < Fraction(2, 3)


def test_epoch_signs_follow_interval_parts():
    params = SchemeParams(horizon=4096)
    result = play_game(_scheme(params), build_forecaster("hedging"), horizon=4096, grid=params.grid, seed=11)
    transcript = result.transcript
    for epoch in transcript.epochs:
        partial = CalibrationLedger(params.grid)
        for index, bit in zip(transcript.numerators[: epoch.end_step], transcript.bits[: epoch.end_step]):
            partial.record_index(index, bit)
        positive, negative = partial.scaled_parts(params.grid.indices_inside(epoch.interval))
        assert epoch.sign == ("+" if positive >= negative else "-")


def test_early_stop_fires_once_calerr_reaches_b():
    params = SchemeParams(horizon=4096)
    wrapper = EarlyStoppingWrapper(_scheme(params), params.B, 4096)
    result = play_game(wrapper, build_forecaster("const:1/2"), horizon=4096, grid=params.grid, seed=5)
    assert result.early_stop_triggered
    assert result.trigger_step == result.t_act == 1
    assert result.steps == 4096
    assert result.B == params.B
    # the tail repeats the sign of the first bias, so |bias(1/2)| grows by 1/2 per step
    assert result.final_calerr == 2048
    assert result.tail_bit == result.transcript.bits[0]
    assert set(result.transcript.bits[1:]) == {result.tail_bit}
    assert result.epoch_labels == []


@pytest.mark.parametrize("forecaster", ["const:1/2", "hedging", "truthful:16", "const:2/5"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_early_stop_guarantee(forecaster, seed):
    params = SchemeParams(horizon=300)
    wrapper = EarlyStoppingWrapper(_scheme(params), 4.0, 300)
    result = play_game(wrapper, build_forecaster(forecaster), horizon=300, grid=params.grid, seed=seed)
    assert result.steps == 300
    if result.early_stop_triggered:
        assert result.final_calerr >= 2.0
        assert result.trigger_step == result.t_act


def test_early_scheme_end_is_padded_to_the_horizon():
    params = SchemeParams(horizon=300)
    assert (params.k, params.num_epochs, params.epoch_len) == (7, 3, 144)
    wrapper = EarlyStoppingWrapper(_scheme(params), float("inf"), 300)
    result = play_game(wrapper, build_forecaster("const:1/2"), horizon=300, grid=params.grid, seed=1)
    assert not result.early_stop_triggered
    assert result.trigger_step is None
    # epoch 1 stops after one bit, the other two run their full 144 steps
    assert result.t_act == 289
    assert result.steps == 300
    assert result.tail_bit in (0, 1)
    assert set(result.transcript.bits[289:]) == {result.tail_bit}


def test_early_stop_rejects_non_positive_threshold():
    params = SchemeParams(horizon=300)
    with pytest.raises(ConfigurationError):
        EarlyStoppingWrapper(_scheme(params), 0.0, 300)


def _drive_epoch(length, theta, index, *, seed=0):
    """Plays one epoch over the (1/3, 2/3) interval on the 1/12 grid, predicting `index` every step."""
    grid = PredictionGrid(12)
    ctx = new_context(grid, length, np.random.default_rng(seed))
    epoch = run_epoch(ctx, length, OpenInterval(Fraction(1, 3), Fraction(2, 3)), Fraction(1, 2), theta)
    while True:
        try:
            commit = next(epoch)
        except StopIteration as stop:
            return ctx, stop.value
        ctx.ledger.record_index(index, commit.bit)
        ctx.transcript.append(index, commit.bit, commit.announced_bias)


def test_epoch_with_zero_threshold_emits_nothing():
    ctx, outcome = _drive_epoch(50, 0.0, 6)
    assert (outcome.steps, outcome.stopped_by_threshold) == (0, True)
    assert ctx.step == 0


def test_epoch_runs_to_exhaustion_when_predictions_stay_outside():
    ctx, outcome = _drive_epoch(200, 0.5, 0)
    assert (outcome.steps, outcome.stopped_by_threshold) == (200, False)
    assert ctx.ledger.calerr > 0
    assert set(ctx.transcript.announced) == {0.5}


@pytest.mark.parametrize("seed", range(5))
def test_midpoint_epoch_stops_when_the_walk_reaches_one(seed):
    ctx, outcome = _drive_epoch(10_000, 1.0, 6, seed=seed)
    assert outcome.stopped_by_threshold
    walk = np.cumsum(np.asarray(ctx.transcript.bits) - 0.5)
    assert len(walk) == outcome.steps
    assert abs(walk[-1]) >= 1
    assert np.all(np.abs(walk[:-1]) < 1)
